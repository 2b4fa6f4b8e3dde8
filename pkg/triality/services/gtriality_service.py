"""
Group Triality Service - groups with an S3 action

This service handles finite groups carrying automorphisms rho, sigma with
sigma^2 = rho^3 = 1 and sigma rho = rho^2 sigma: the triality predicate, the
Moufang loop M(G) = {g^-1 g^sigma}, the S3-centre Z_S(G) and the embedding of G
into the autotopy group of M(G).

Exponent notation is a right action: g^(rho sigma) = (g^rho)^sigma. S3 elements
are written as words over "r" (rho) and "s" (sigma) applied left to right.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Any, Dict, Hashable, List, NamedTuple, Optional, Sequence

from triality.config import config
from triality.services.loop_service import (
    FiniteLoop,
    Perm,
    check_loop,
    check_moufang,
    compose,
    cyclic_group,
    direct_product,
    identity_perm,
    invert,
    is_permutation,
    require_group,
    symmetric_group_s3,
)
from triality.utils.errors import CapExceededError, NotAutomorphismError, TrialityError, VerificationError
from triality.utils.helpers import CheckResult, check_failed, check_passed, setup_logger

# Setup logging
logger = setup_logger(__name__)

# The six elements of S3 as words in rho and sigma
S3_WORDS = ("", "r", "rr", "s", "rs", "rrs")


class TrialityStructure(ABC):
    """A finite group with S3 acting by automorphisms; elements are hashable values"""

    name: str = "G"

    @property
    @abstractmethod
    def identity(self) -> Hashable: ...

    @abstractmethod
    def elements(self) -> Sequence[Hashable]:
        """All elements in canonical order, identity first"""

    @abstractmethod
    def mul(self, a: Hashable, b: Hashable) -> Hashable: ...

    @abstractmethod
    def inv(self, a: Hashable) -> Hashable: ...

    @abstractmethod
    def rho(self, a: Hashable) -> Hashable: ...

    @abstractmethod
    def sigma(self, a: Hashable) -> Hashable: ...

    @property
    def order(self) -> int:
        return len(self.elements())

    def index(self, a: Hashable) -> int:
        if not hasattr(self, "_index_cache"):
            self._index_cache = {e: i for i, e in enumerate(self.elements())}
        return self._index_cache[a]

    def act(self, a: Hashable, word: str) -> Hashable:
        for letter in word:
            a = self.rho(a) if letter == "r" else self.sigma(a)
        return a

    def describe(self, a: Hashable) -> Any:
        """JSON-friendly label of an element (1-based position)"""
        return self.index(a) + 1


class TrialityGroup(TrialityStructure):
    """Table group with rho, sigma given as permutations of the element indices"""

    def __init__(self, group: FiniteLoop, rho: Perm, sigma: Perm, name: Optional[str] = None):
        self.group = group
        self.rho_perm = tuple(rho)
        self.sigma_perm = tuple(sigma)
        self.name = name or group.name
        self._inverse = tuple(group.inverse(x) for x in range(group.order))

    @property
    def identity(self) -> int:
        return 0

    def elements(self) -> Sequence[int]:
        return range(self.group.order)

    def index(self, a: int) -> int:
        return a

    def mul(self, a: int, b: int) -> int:
        return self.group.mul(a, b)

    def inv(self, a: int) -> int:
        return self._inverse[a]

    def rho(self, a: int) -> int:
        return self.rho_perm[a]

    def sigma(self, a: int) -> int:
        return self.sigma_perm[a]


def check_s3_relations(g: TrialityStructure) -> CheckResult:
    """sigma^2 = rho^3 = 1 and sigma rho = rho^2 sigma, elementwise"""
    for a in g.elements():
        if g.act(a, "rrr") != a:
            return check_failed({"relation": "rho^3 = 1", "element": g.describe(a)})
        if g.act(a, "ss") != a:
            return check_failed({"relation": "sigma^2 = 1", "element": g.describe(a)})
        if g.act(a, "sr") != g.act(a, "rrs"):
            return check_failed({"relation": "sigma rho = rho^2 sigma", "element": g.describe(a)})
    return check_passed({"elements": g.order})


def _check_automorphism(group: FiniteLoop, f: Perm, label: str) -> None:
    n = group.order
    if not is_permutation(f, n):
        raise NotAutomorphismError(f"{label} is not a permutation of 1..{n}")
    for a in range(n):
        for b in range(n):
            if f[group.mul(a, b)] != group.mul(f[a], f[b]):
                raise NotAutomorphismError(f"{label} is not multiplicative at ({a + 1},{b + 1})")


def build_triality_group(group: FiniteLoop, rho: Perm, sigma: Perm, name: Optional[str] = None) -> TrialityGroup:
    """Validate the table, both automorphisms and the S3 relations"""
    if group.order > config.MAX_GROUP_ORDER:
        raise CapExceededError(f"group order {group.order} exceeds cap {config.MAX_GROUP_ORDER}")
    require_group(group)
    _check_automorphism(group, tuple(rho), "rho")
    _check_automorphism(group, tuple(sigma), "sigma")
    g = TrialityGroup(group, rho, sigma, name)
    relations = check_s3_relations(g)
    if not relations["passed"]:
        raise NotAutomorphismError(f"S3 relations fail: {relations['witness']}")
    return g


def triality_element(g: TrialityStructure, a: Hashable) -> Hashable:
    """m = a^-1 a^sigma"""
    return g.mul(g.inv(a), g.sigma(a))


def check_triality(g: TrialityStructure) -> CheckResult:
    """(g^-1 g^sigma)(g^-1 g^sigma)^rho (g^-1 g^sigma)^(rho^2) = 1 for every g"""
    for a in g.elements():
        m = triality_element(g, a)
        product = g.mul(g.mul(m, g.rho(m)), g.act(m, "rr"))
        if product != g.identity:
            logger.info(f"Triality fails on {g.name} at element {g.describe(a)}")
            return check_failed({"element": g.describe(a), "product": g.describe(product)}, {"elements": g.order})
    return check_passed({"elements": g.order})


class MLoopResult(NamedTuple):
    carrier: List[Hashable]
    loop: FiniteLoop
    section: List[Hashable]
    moufang: CheckResult

    def index_of(self, m: Hashable) -> int:
        return self.carrier.index(m)


def m_product(g: TrialityStructure, m: Hashable, n: Hashable) -> Hashable:
    """m . n = m^-rho n m^-rho^2"""
    return g.mul(g.mul(g.inv(g.rho(m)), n), g.inv(g.act(m, "rr")))


def m_product_alt(g: TrialityStructure, m: Hashable, n: Hashable) -> Hashable:
    """m . n = n^-rho^2 m n^-rho"""
    return g.mul(g.mul(g.inv(g.act(n, "rr")), m), g.inv(g.rho(n)))


def moufang_from_triality(g: TrialityStructure, reverse_scan: bool = False) -> MLoopResult:
    """The loop M(G) on {g^-1 g^sigma}, unit first, then by group order"""
    first_preimage: Dict[Hashable, Hashable] = {}
    scan = list(g.elements())
    if reverse_scan:
        scan.reverse()
    for a in scan:
        first_preimage.setdefault(triality_element(g, a), a)

    carrier = sorted(first_preimage, key=g.index)
    carrier.remove(g.identity)
    carrier.insert(0, g.identity)
    position = {m: i for i, m in enumerate(carrier)}

    table = []
    for m in carrier:
        row = []
        for n in carrier:
            p = m_product(g, m, n)
            if p != m_product_alt(g, m, n):
                raise VerificationError(
                    f"M(G) product formulas disagree at ({g.describe(m)}, {g.describe(n)})"
                )
            if p not in position:
                raise VerificationError(f"M(G) carrier not closed at ({g.describe(m)}, {g.describe(n)})")
            row.append(position[p])
        table.append(row)

    loop = check_loop(table, f"M({g.name})")
    result = MLoopResult(carrier, loop, [first_preimage[m] for m in carrier], check_moufang(loop))
    logger.info(f"M({g.name}) has order {loop.order}")
    return result


def check_section_independence(g: TrialityStructure) -> CheckResult:
    """The M(G) table does not depend on the scan order choosing the section"""
    forward = moufang_from_triality(g)
    backward = moufang_from_triality(g, reverse_scan=True)
    if forward.loop != backward.loop or forward.carrier != backward.carrier:
        return check_failed({"reason": "tables differ between scan orders"})
    return check_passed({"carrier": forward.loop.order})


class CenterResult(NamedTuple):
    elements: List[Hashable]
    normal: bool


def s3_center(g: TrialityStructure) -> CenterResult:
    """{z : z^rho = z^sigma = z and z commutes with every g^-1 g^tau}"""
    candidates = [z for z in g.elements() if g.rho(z) == z and g.sigma(z) == z]
    twisted = set()
    for a in g.elements():
        a_inv = g.inv(a)
        for word in S3_WORDS[1:]:
            twisted.add(g.mul(a_inv, g.act(a, word)))
    center = [
        z for z in candidates
        if all(g.mul(c, z) == g.mul(z, c) for c in twisted)
    ]
    members = set(center)
    closed = g.identity in members and all(g.mul(a, b) in members for a in center for b in center)
    normal = closed and all(
        g.mul(g.mul(a, z), g.inv(a)) in members for a in g.elements() for z in center
    )
    logger.info(f"Z_S({g.name}) has order {len(center)}")
    return CenterResult(center, normal)


class EmbeddingResult(NamedTuple):
    mloop: MLoopResult
    images: Dict[Hashable, tuple]
    kernel: List[Hashable]
    result: CheckResult


def embed_into_autotopy(g: TrialityStructure) -> EmbeddingResult:
    """x -> (A1(x), A2(x), A3(x)) acting on the carrier of M(G)

    A1(x): m -> x^-(rho^2 sigma) m x^(rho^2)
    A2(x): m -> x^-1 m x^sigma
    A3(x): m -> x^-rho m x^(rho sigma)
    """
    from triality.services.autotopy_service import atp_rho, atp_sigma, is_autotopy

    mloop = moufang_from_triality(g)
    carrier = mloop.carrier
    position = {m: i for i, m in enumerate(carrier)}
    q = mloop.loop

    def twist(left: Hashable, right: Hashable) -> Perm:
        try:
            return tuple(position[g.mul(g.mul(left, m), right)] for m in carrier)
        except KeyError as e:
            raise VerificationError("embedding image leaves the M(G) carrier") from e

    images: Dict[Hashable, tuple] = {}
    for x in g.elements():
        a1 = twist(g.inv(g.act(x, "rrs")), g.act(x, "rr"))
        a2 = twist(g.inv(x), g.sigma(x))
        a3 = twist(g.inv(g.rho(x)), g.act(x, "rs"))
        images[x] = (a1, a2, a3)

    identity = (identity_perm(q.order),) * 3
    kernel = [x for x in g.elements() if images[x] == identity]
    center = s3_center(g)

    def run() -> CheckResult:
        for x, t in images.items():
            verdict = is_autotopy(q, *t)
            if not verdict["passed"]:
                return check_failed({"property": "autotopy", "element": g.describe(x), **verdict["witness"]})
        for x in g.elements():
            for y in g.elements():
                lhs = images[g.mul(x, y)]
                rhs = tuple(compose(a, b) for a, b in zip(images[x], images[y]))
                if lhs != rhs:
                    return check_failed({"property": "homomorphism", "x": g.describe(x), "y": g.describe(y)})
        for x in g.elements():
            if images[g.rho(x)] != atp_rho(q, images[x]):
                return check_failed({"property": "rho-equivariance", "element": g.describe(x)})
            if images[g.sigma(x)] != atp_sigma(q, images[x]):
                return check_failed({"property": "sigma-equivariance", "element": g.describe(x)})
        if set(kernel) != set(center.elements):
            return check_failed({"property": "kernel = Z_S(G)",
                                 "kernel": [g.describe(x) for x in kernel],
                                 "center": [g.describe(z) for z in center.elements]})
        return check_passed({"elements": g.order, "pairs": g.order ** 2},
                            kernel_order=len(kernel), injective=len(kernel) == 1)

    return EmbeddingResult(mloop, images, kernel, run())


# Corpus builders

def trivial_action(group: FiniteLoop, name: Optional[str] = None) -> TrialityGroup:
    ident = identity_perm(group.order)
    return build_triality_group(group, ident, ident, name)


def wreath_cube(base: FiniteLoop, name: Optional[str] = None) -> TrialityGroup:
    """G^3 with rho: (a,b,c) -> (c,a,b) and sigma: (a,b,c) -> (b,a,c)"""
    n = base.order
    cube = direct_product(direct_product(base, base), base, f"{base.name}^3")

    def split(x: int):
        return x // (n * n), (x // n) % n, x % n

    def join(a: int, b: int, c: int) -> int:
        return (a * n + b) * n + c

    rho, sigma = [], []
    for x in range(cube.order):
        a, b, c = split(x)
        rho.append(join(c, a, b))
        sigma.append(join(b, a, c))
    return build_triality_group(cube, tuple(rho), tuple(sigma), name or f"{base.name}wr")


def conjugation_triality_s3() -> TrialityGroup:
    """S3 with rho = id and sigma = conjugation by the transposition (0 1)"""
    s3, perms = symmetric_group_s3()
    t = perms.index((1, 0, 2))
    sigma = tuple(s3.mul(s3.mul(t, g), t) for g in range(s3.order))
    return build_triality_group(s3, identity_perm(s3.order), sigma, "S3conj")


def inversion_fixture_c4() -> TrialityGroup:
    """C4 with sigma = inversion, rho = id; fails the triality predicate"""
    c4 = cyclic_group(4)
    sigma = tuple((-x) % 4 for x in range(4))
    return build_triality_group(c4, identity_perm(4), sigma, "C4inv")


def with_trivial_factor(g: TrialityGroup, h: FiniteLoop, name: Optional[str] = None) -> TrialityGroup:
    """G x H with S3 acting on the first factor only"""
    product = direct_product(g.group, h)
    m = h.order
    rho = tuple(g.rho(x // m) * m + x % m for x in range(product.order))
    sigma = tuple(g.sigma(x // m) * m + x % m for x in range(product.order))
    return build_triality_group(product, rho, sigma, name or f"{g.name}x{h.name}")


def triality_group_from_table(
    table: Sequence[Sequence[int]], rho: Sequence[int], sigma: Sequence[int], name: str = "G"
) -> TrialityGroup:
    """0-based table and permutations to a validated triality group"""
    group = check_loop(table, name)
    n = group.order
    for label, f in (("rho", rho), ("sigma", sigma)):
        if not is_permutation(list(f), n):
            raise TrialityError(f"{label} is not a permutation of 1..{n}")
    return build_triality_group(group, tuple(rho), tuple(sigma), name)
