"""
Hopf Service - cocommutative Hopf algebras with triality

This service handles Hopf algebras given on a basis: group algebras of groups
with triality, loop algebras of Moufang loops, the map P(u) = sum sigma(u1) S(u2),
the triality identity sum P(u1) rho(P(u2)) rho^2(P(u3)) = eps(u) 1, the
Moufang-Hopf algebra MH(H) with its * product, the operator identities of the
multiplication algebra, and verification of the Doro(U) relations in a
concrete target.

Operators act on the left of their arguments here; for permutations of a
group-like basis, X Y means Y is applied first.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Callable, Dict, Hashable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from triality.config import config
from triality.services.gtriality_service import TrialityStructure, moufang_from_triality
from triality.services.loop_service import FiniteLoop, Perm, associativity_witness, compose_all, invert, is_moufang, mult_ops
from triality.services.qcore_service import ONE, ZERO, Rational, Subspace, q, sparse_rank
from triality.utils.errors import UnsupportedInputError, VerificationError
from triality.utils.helpers import (
    CheckResult,
    check_failed,
    check_passed,
    format_rational,
    index_tuples,
    merge_results,
    setup_logger,
)

# Setup logging
logger = setup_logger(__name__)

Element = Dict[Hashable, Rational]
Tensor = Dict[Tuple[Hashable, ...], Rational]


# HopfElement arithmetic: sparse maps from basis keys to nonzero rationals

def element(key: Hashable, coefficient=ONE) -> Element:
    c = q(coefficient)
    return {key: c} if c else {}


def add(*elements: Mapping[Hashable, Rational]) -> Element:
    out: Element = {}
    for u in elements:
        for k, c in u.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
    return out


def scale(c, u: Mapping[Hashable, Rational]) -> Element:
    c = q(c)
    if not c:
        return {}
    return {k: c * a for k, a in u.items()}


def sub(u: Mapping[Hashable, Rational], v: Mapping[Hashable, Rational]) -> Element:
    return add(u, scale(-ONE, v))


def describe_element(u: Mapping[Hashable, Rational]) -> Dict[str, str]:
    """JSON-friendly rendering of an element"""
    return {str(k): format_rational(c) for k, c in sorted(u.items(), key=lambda kv: str(kv[0]))}


class HopfCarrier(ABC):
    """Hopf algebra on a basis of hashable keys; every operation is given on basis keys"""

    name: str = "H"
    associative: bool = True

    @property
    @abstractmethod
    def unit_key(self) -> Hashable: ...

    @abstractmethod
    def basis(self) -> Sequence[Hashable]:
        """The basis (for infinite carriers, a truncation of it)"""

    @abstractmethod
    def basis_mul(self, a: Hashable, b: Hashable) -> Element: ...

    @abstractmethod
    def basis_coproduct(self, a: Hashable) -> List[Tuple[Rational, Hashable, Hashable]]: ...

    @abstractmethod
    def basis_counit(self, a: Hashable) -> Rational: ...

    @abstractmethod
    def basis_antipode(self, a: Hashable) -> Element: ...

    def basis_rho(self, a: Hashable) -> Element:
        return element(a)

    def basis_sigma(self, a: Hashable) -> Element:
        return element(a)

    # linear extensions

    def unit(self) -> Element:
        return element(self.unit_key)

    def mul(self, u: Mapping[Hashable, Rational], v: Mapping[Hashable, Rational]) -> Element:
        out: Element = {}
        for a, c in u.items():
            for b, d in v.items():
                for k, e in self.basis_mul(a, b).items():
                    out[k] = out.get(k, ZERO) + c * d * e
        return {k: c for k, c in out.items() if c}

    def product(self, *factors: Mapping[Hashable, Rational]) -> Element:
        """Left-normed product ((f1 f2) f3) ..."""
        out = dict(factors[0])
        for f in factors[1:]:
            out = self.mul(out, f)
        return out

    def _linear(self, fn: Callable[[Hashable], Element], u: Mapping[Hashable, Rational]) -> Element:
        return add(*(scale(c, fn(a)) for a, c in u.items())) if u else {}

    def antipode(self, u: Mapping[Hashable, Rational]) -> Element:
        return self._linear(self.basis_antipode, u)

    def rho(self, u: Mapping[Hashable, Rational]) -> Element:
        return self._linear(self.basis_rho, u)

    def sigma(self, u: Mapping[Hashable, Rational]) -> Element:
        return self._linear(self.basis_sigma, u)

    def counit(self, u: Mapping[Hashable, Rational]) -> Rational:
        return sum((c * self.basis_counit(a) for a, c in u.items()), ZERO)

    def coproduct(self, u: Mapping[Hashable, Rational]) -> Tensor:
        out: Tensor = {}
        for a, c in u.items():
            for d, a1, a2 in self.basis_coproduct(a):
                key = (a1, a2)
                out[key] = out.get(key, ZERO) + c * d
        return {k: c for k, c in out.items() if c}

    def coproduct_n(self, u: Mapping[Hashable, Rational], n: int) -> Tensor:
        """Iterated coproduct into n tensor factors, splitting the last factor each time"""
        out: Tensor = {(a,): c for a, c in u.items()}
        for _ in range(n - 1):
            nxt: Tensor = {}
            for key, c in out.items():
                for d, a1, a2 in self.basis_coproduct(key[-1]):
                    k = key[:-1] + (a1, a2)
                    nxt[k] = nxt.get(k, ZERO) + c * d
            out = {k: c for k, c in nxt.items() if c}
        return out

    def s3(self, u: Mapping[Hashable, Rational], word: str) -> Element:
        """Apply a word in rho ("r") and sigma ("s"), rightmost letter first"""
        for letter in reversed(word):
            u = self.rho(u) if letter == "r" else self.sigma(u)
        return u


class GroupAlgebra(HopfCarrier):
    """F[G] with Delta(g) = g x g, eps(g) = 1, S(g) = g^-1"""

    def __init__(self, g: TrialityStructure):
        self.group = g
        self.name = f"F[{g.name}]"

    @property
    def unit_key(self) -> Hashable:
        return self.group.identity

    def basis(self) -> Sequence[Hashable]:
        return self.group.elements()

    def basis_mul(self, a, b) -> Element:
        return element(self.group.mul(a, b))

    def basis_coproduct(self, a):
        return [(ONE, a, a)]

    def basis_counit(self, a) -> Rational:
        return ONE

    def basis_antipode(self, a) -> Element:
        return element(self.group.inv(a))

    def basis_rho(self, a) -> Element:
        return element(self.group.rho(a))

    def basis_sigma(self, a) -> Element:
        return element(self.group.sigma(a))


def group_algebra(g: TrialityStructure) -> GroupAlgebra:
    return GroupAlgebra(g)


class LoopAlgebra(HopfCarrier):
    """F[Q] of a Moufang loop, group-like basis; a Moufang-Hopf algebra"""

    associative = False

    def __init__(self, q: FiniteLoop):
        self.loop = q
        self.name = f"F[{q.name}]"
        self._inverse = tuple(q.inverse(x) for x in range(q.order))

    @property
    def unit_key(self) -> int:
        return 0

    def basis(self) -> Sequence[int]:
        return range(self.loop.order)

    def basis_mul(self, a, b) -> Element:
        return element(self.loop.mul(a, b))

    def basis_coproduct(self, a):
        return [(ONE, a, a)]

    def basis_counit(self, a) -> Rational:
        return ONE

    def basis_antipode(self, a) -> Element:
        return element(self._inverse[a])


def loop_algebra(q: FiniteLoop) -> LoopAlgebra:
    if not is_moufang(q):
        raise UnsupportedInputError(f"{q.name} is not a Moufang loop")
    return LoopAlgebra(q)


class Retwisted(HopfCarrier):
    """The same Hopf algebra with rho, sigma replaced by other words in the S3 action"""

    def __init__(self, parent: HopfCarrier, rho_word: str, sigma_word: str):
        self.parent = parent
        self.rho_word = rho_word
        self.sigma_word = sigma_word
        self.associative = parent.associative
        self.name = f"{parent.name}[rho={rho_word},sigma={sigma_word}]"

    @property
    def unit_key(self):
        return self.parent.unit_key

    def basis(self):
        return self.parent.basis()

    def basis_mul(self, a, b):
        return self.parent.basis_mul(a, b)

    def basis_coproduct(self, a):
        return self.parent.basis_coproduct(a)

    def basis_counit(self, a):
        return self.parent.basis_counit(a)

    def basis_antipode(self, a):
        return self.parent.basis_antipode(a)

    def basis_rho(self, a):
        return self.parent.s3(element(a), self.rho_word)

    def basis_sigma(self, a):
        return self.parent.s3(element(a), self.sigma_word)


def p_map(h: HopfCarrier, u: Mapping[Hashable, Rational]) -> Element:
    """P(u) = sum sigma(u1) S(u2)"""
    terms = []
    for (a1, a2), c in h.coproduct(u).items():
        terms.append(scale(c, h.mul(h.sigma(element(a1)), h.antipode(element(a2)))))
    return add(*terms)


def _elements(h: HopfCarrier, elements: Optional[Sequence[Element]]) -> List[Element]:
    return list(elements) if elements is not None else [element(a) for a in h.basis()]


def check_hopf_triality(h: HopfCarrier, elements: Optional[Sequence[Element]] = None) -> CheckResult:
    """sum P(u1) rho(P(u2)) rho^2(P(u3)) = eps(u) 1 on the given elements (default: the basis)"""
    checked = _elements(h, elements)
    for u in checked:
        total = []
        for (a1, a2, a3), c in h.coproduct_n(u, 3).items():
            p1 = p_map(h, element(a1))
            p2 = h.rho(p_map(h, element(a2)))
            p3 = h.s3(p_map(h, element(a3)), "rr")
            total.append(scale(c, h.product(p1, p2, p3)))
        lhs = add(*total)
        rhs = scale(h.counit(u), h.unit())
        if lhs != rhs:
            logger.info(f"Hopf triality fails on {h.name}")
            return check_failed({"element": describe_element(u), "lhs": describe_element(lhs)},
                                {"elements": len(checked)})
    return check_passed({"elements": len(checked)})


def check_commutation(h: HopfCarrier, u: Mapping[Hashable, Rational], i: int, j: int) -> bool:
    """sum rho^i(u1) rho^j(u2) = sum rho^j(u1) rho^i(u2)"""
    lhs, rhs = [], []
    for (a1, a2), c in h.coproduct(u).items():
        x1, x2 = element(a1), element(a2)
        lhs.append(scale(c, h.mul(h.s3(x1, "r" * i), h.s3(x2, "r" * j))))
        rhs.append(scale(c, h.mul(h.s3(x1, "r" * j), h.s3(x2, "r" * i))))
    return add(*lhs) == add(*rhs)


def check_generator_independence(h: HopfCarrier, elements: Optional[Sequence[Element]] = None) -> CheckResult:
    """The triality verdict is the same for (rho, sigma), (rho^2, rho sigma) and (rho, rho^2 sigma)"""
    verdicts = {
        "rho, sigma": check_hopf_triality(h, elements)["passed"],
        "rho^2, rho sigma": check_hopf_triality(Retwisted(h, "rr", "rs"), elements)["passed"],
        "rho, rho^2 sigma": check_hopf_triality(Retwisted(h, "r", "rrs"), elements)["passed"],
    }
    if len(set(verdicts.values())) != 1:
        return check_failed({"verdicts": verdicts})
    return check_passed(verdicts=verdicts, triality=verdicts["rho, sigma"])


def _pairs(h: HopfCarrier, seed: Optional[int] = None):
    seed = config.SEED if seed is None else seed
    basis = list(h.basis())
    for i, j in index_tuples(len(basis), 2, seed):
        yield basis[i], basis[j]


def check_hopf_axioms(h: HopfCarrier, with_triality: bool = True, seed: Optional[int] = None,
                      pairs: Optional[Sequence[Tuple[Hashable, Hashable]]] = None) -> CheckResult:
    """Counit, antipode, coassociativity, cocommutativity, bialgebra compatibility and Hopf automorphisms

    Products are checked on `pairs` of basis keys when given, else on all or sampled basis pairs.
    """
    basis = list(h.basis())
    pair_list = list(pairs) if pairs is not None else list(_pairs(h, seed))
    parts: Dict[str, CheckResult] = {}

    def first(name: str, predicate) -> None:
        for a in basis:
            bad = predicate(a)
            if bad:
                parts[name] = check_failed({"element": str(a), "detail": bad})
                return
        parts[name] = check_passed({"basis": len(basis)})

    def counit(a):
        u = element(a)
        left = add(*(scale(c * h.basis_counit(a1), element(a2)) for (a1, a2), c in h.coproduct(u).items()))
        right = add(*(scale(c * h.basis_counit(a2), element(a1)) for (a1, a2), c in h.coproduct(u).items()))
        return None if left == u == right else "counit"

    def antipode(a):
        u = element(a)
        target = scale(h.counit(u), h.unit())
        terms = h.coproduct(u).items()
        left = add(*(scale(c, h.mul(h.antipode(element(a1)), element(a2))) for (a1, a2), c in terms))
        right = add(*(scale(c, h.mul(element(a1), h.antipode(element(a2)))) for (a1, a2), c in terms))
        return None if left == target == right else "antipode"

    def coassociative(a):
        u = element(a)
        left: Tensor = {}
        for (a1, a2), c in h.coproduct(u).items():
            for (b1, b2), d in h.coproduct(element(a1)).items():
                left[(b1, b2, a2)] = left.get((b1, b2, a2), ZERO) + c * d
        left = {k: c for k, c in left.items() if c}
        return None if left == h.coproduct_n(u, 3) else "coassociativity"

    def cocommutative(a):
        delta = h.coproduct(element(a))
        return None if delta == {(k2, k1): c for (k1, k2), c in delta.items()} else "cocommutativity"

    first("counit", counit)
    first("antipode", antipode)
    first("coassociative", coassociative)
    first("cocommutative", cocommutative)

    compat_witness = None
    for a, b in pair_list:
        ua, ub = element(a), element(b)
        lhs = h.coproduct(h.mul(ua, ub))
        rhs: Tensor = {}
        for (a1, a2), c in h.coproduct(ua).items():
            for (b1, b2), d in h.coproduct(ub).items():
                for k1, e1 in h.basis_mul(a1, b1).items():
                    for k2, e2 in h.basis_mul(a2, b2).items():
                        rhs[(k1, k2)] = rhs.get((k1, k2), ZERO) + c * d * e1 * e2
        rhs = {k: c for k, c in rhs.items() if c}
        if lhs != rhs or h.counit(h.mul(ua, ub)) != h.basis_counit(a) * h.basis_counit(b):
            compat_witness = {"a": str(a), "b": str(b)}
            break
    parts["bialgebra"] = check_failed(compat_witness) if compat_witness else check_passed()

    if with_triality:
        parts["automorphisms"] = _check_hopf_automorphisms(h, pair_list)
        for a in basis:
            u = element(a)
            if h.s3(u, "rrr") != u or h.s3(u, "ss") != u or h.s3(u, "sr") != h.s3(u, "rrs"):
                parts["s3_relations"] = check_failed({"element": str(a)})
                break
        else:
            parts["s3_relations"] = check_passed({"basis": len(basis)})
    return merge_results(parts)


def _check_hopf_automorphisms(h: HopfCarrier, pairs: Sequence[Tuple[Hashable, Hashable]]) -> CheckResult:
    for name in ("rho", "sigma"):
        phi = h.rho if name == "rho" else h.sigma
        for a, b in pairs:
            ua, ub = element(a), element(b)
            if phi(h.mul(ua, ub)) != h.mul(phi(ua), phi(ub)):
                return check_failed({"map": name, "a": str(a), "b": str(b)})
        for a in h.basis():
            u = element(a)
            image = phi(u)
            mapped: Tensor = {}
            for (a1, a2), c in h.coproduct(u).items():
                for k1, c1 in phi(element(a1)).items():
                    for k2, c2 in phi(element(a2)).items():
                        mapped[(k1, k2)] = mapped.get((k1, k2), ZERO) + c * c1 * c2
            mapped = {k: c for k, c in mapped.items() if c}
            if h.coproduct(image) != mapped:
                return check_failed({"map": name, "element": str(a), "property": "coproduct"})
            if h.counit(image) != h.basis_counit(a):
                return check_failed({"map": name, "element": str(a), "property": "counit"})
            if h.antipode(image) != phi(h.antipode(u)):
                return check_failed({"map": name, "element": str(a), "property": "antipode"})
    return check_passed()


def check_moufang_hopf(u: HopfCarrier, elements: Optional[Sequence[Hashable]] = None,
                       seed: Optional[int] = None) -> CheckResult:
    """Left, middle and right Moufang-Hopf identities and the two-sided antipode conditions"""
    seed = config.SEED if seed is None else seed
    keys = list(elements) if elements is not None else list(u.basis())
    m = u.mul
    parts: Dict[str, CheckResult] = {}
    identities = {
        # sum a1(v(a2 w)) = sum ((a1 v) a2) w
        "left": lambda a1, a2, v, w: (m(a1, m(v, m(a2, w))), m(m(m(a1, v), a2), w)),
        # sum (a1(v w)) a2 = sum (a1 v)(w a2)
        "middle": lambda a1, a2, v, w: (m(m(a1, m(v, w)), a2), m(m(a1, v), m(w, a2))),
        # sum ((v a1) w) a2 = sum v(a1(w a2))
        "right": lambda a1, a2, v, w: (m(m(m(v, a1), w), a2), m(v, m(a1, m(w, a2)))),
    }
    triples = list(index_tuples(len(keys), 3, seed))
    for name, identity in identities.items():
        witness = None
        for i, j, k in triples:
            a, v, w = element(keys[i]), element(keys[j]), element(keys[k])
            lhs, rhs = [], []
            for (a1, a2), c in u.coproduct(a).items():
                left, right = identity(element(a1), element(a2), v, w)
                lhs.append(scale(c, left))
                rhs.append(scale(c, right))
            if add(*lhs) != add(*rhs):
                witness = {"u": str(keys[i]), "v": str(keys[j]), "w": str(keys[k])}
                break
        parts[name] = check_failed(witness) if witness else check_passed({"triples": len(triples)})

    witness = None
    for i, j in index_tuples(len(keys), 2, seed):
        a, v = element(keys[i]), element(keys[j])
        target = scale(u.counit(a), v)
        sums = [[], [], [], []]
        for (a1, a2), c in u.coproduct(a).items():
            x1, x2 = element(a1), element(a2)
            sums[0].append(scale(c, m(u.antipode(x1), m(x2, v))))
            sums[1].append(scale(c, m(x1, m(u.antipode(x2), v))))
            sums[2].append(scale(c, m(m(v, x1), u.antipode(x2))))
            sums[3].append(scale(c, m(m(v, u.antipode(x1)), x2)))
        if any(add(*s) != target for s in sums):
            witness = {"u": str(keys[i]), "v": str(keys[j])}
            break
    parts["antipode"] = check_failed(witness) if witness else check_passed()

    result = merge_results(parts)
    if isinstance(u, LoopAlgebra):
        assoc = associativity_witness(u.loop)
        result["details"]["associative"] = assoc is None
        if assoc is not None:
            result["details"]["nonassociative_triple"] = [x + 1 for x in assoc]
    return result


# MH(H)

def star(h: HopfCarrier, u: Mapping[Hashable, Rational], v: Mapping[Hashable, Rational]) -> Element:
    """u * v = sum rho^2(S(u1)) v rho(S(u2))"""
    terms = []
    for (a1, a2), c in h.coproduct(u).items():
        left = h.s3(h.antipode(element(a1)), "rr")
        right = h.rho(h.antipode(element(a2)))
        terms.append(scale(c, h.mul(h.mul(left, v), right)))
    return add(*terms)


def star_alt(h: HopfCarrier, u: Mapping[Hashable, Rational], v: Mapping[Hashable, Rational]) -> Element:
    """u * v = sum rho(S(v1)) u rho^2(S(v2))"""
    terms = []
    for (b1, b2), c in h.coproduct(v).items():
        left = h.rho(h.antipode(element(b1)))
        right = h.s3(h.antipode(element(b2)), "rr")
        terms.append(scale(c, h.mul(h.mul(left, u), right)))
    return add(*terms)


class MHSubalgebra(HopfCarrier):
    """MH(H) = {P(x)} for a parent whose P-images of basis elements are group-like"""

    associative = False

    def __init__(self, parent: HopfCarrier, keys: Sequence[Hashable]):
        self.parent = parent
        self.keys = list(keys)
        self.name = f"MH({parent.name})"

    @property
    def unit_key(self):
        return self.parent.unit_key

    def basis(self):
        return self.keys

    def basis_mul(self, a, b) -> Element:
        return star(self.parent, element(a), element(b))

    def basis_coproduct(self, a):
        return self.parent.basis_coproduct(a)

    def basis_counit(self, a):
        return self.parent.basis_counit(a)

    def basis_antipode(self, a):
        return self.parent.basis_antipode(a)


def check_p_antipode(h: HopfCarrier, elements: Optional[Sequence[Element]] = None) -> CheckResult:
    """S(P(x)) = sigma(P(x)) = P(sigma(x))"""
    checked = _elements(h, elements)
    for x in checked:
        p = p_map(h, x)
        if not h.antipode(p) == h.sigma(p) == p_map(h, h.sigma(x)):
            return check_failed({"element": describe_element(x)})
    return check_passed({"elements": len(checked)})


class MHResult(NamedTuple):
    mh: MHSubalgebra
    p_image: Subspace
    result: CheckResult


def mh_subalgebra(h: HopfCarrier, seed: Optional[int] = None) -> MHResult:
    """MH(H) with * from the first formula, compared against the second and checked as a Moufang-Hopf algebra"""
    basis = list(h.basis())
    position = {k: i for i, k in enumerate(basis)}
    images = [p_map(h, element(a)) for a in basis]

    def vec(u: Mapping[Hashable, Rational]):
        v = [ZERO] * len(basis)
        for k, c in u.items():
            v[position[k]] = c
        return v

    p_image = Subspace.from_vectors([vec(u) for u in images], len(basis))
    keys = []
    for u in images:
        if len(u) != 1 or next(iter(u.values())) != ONE:
            raise UnsupportedInputError(f"P-images in {h.name} are not group-like; use star() on elements")
        (k,) = u
        if k not in keys:
            keys.append(k)
    keys.sort(key=lambda k: position[k])
    mh = MHSubalgebra(h, keys)

    parts: Dict[str, CheckResult] = {}
    witness = None
    for a in keys:
        for b in keys:
            ua, ub = element(a), element(b)
            if star(h, ua, ub) != star_alt(h, ua, ub):
                raise VerificationError(f"the two * formulas disagree at ({a}, {b})")
            product = star(h, ua, ub)
            if not p_image.contains(vec(product)):
                witness = {"property": "closure", "u": str(a), "v": str(b)}
            elif h.antipode(product) != star(h, h.antipode(ub), h.antipode(ua)):
                witness = {"property": "S(u*v) = S(v)*S(u)", "u": str(a), "v": str(b)}
            elif h.coproduct(product) != {
                (k1, k2): c for (k1, k2), c in _star_tensor(h, ua, ub).items()
            }:
                witness = {"property": "coalgebra morphism", "u": str(a), "v": str(b)}
            if witness:
                break
        if witness:
            break
    parts["product"] = check_failed(witness) if witness else check_passed({"pairs": len(keys) ** 2})

    unit = h.unit()
    unit_ok = all(star(h, unit, element(a)) == element(a) == star(h, element(a), unit) for a in keys)
    parts["unit"] = check_passed() if unit_ok else check_failed({"property": "1*v = v = v*1"})
    parts["antipode_closed"] = (
        check_passed() if all(p_image.contains(vec(h.antipode(element(a)))) for a in keys)
        else check_failed({"property": "S(MH) inside MH"})
    )
    parts["p_antipode"] = check_p_antipode(h)
    parts["subcoalgebra"] = _check_p_coalgebra(h)
    parts["moufang_hopf"] = check_moufang_hopf(mh, seed=seed)

    result = merge_results(parts)
    result["details"].update(dim=p_image.dim)
    logger.info(f"{mh.name} has dimension {p_image.dim}")
    return MHResult(mh, p_image, result)


def _star_tensor(h: HopfCarrier, u: Element, v: Element) -> Tensor:
    """sum u1*v1 (x) u2*v2"""
    out: Tensor = {}
    for (a1, a2), c in h.coproduct(u).items():
        for (b1, b2), d in h.coproduct(v).items():
            for k1, e1 in star(h, element(a1), element(b1)).items():
                for k2, e2 in star(h, element(a2), element(b2)).items():
                    out[(k1, k2)] = out.get((k1, k2), ZERO) + c * d * e1 * e2
    return {k: c for k, c in out.items() if c}


def _check_p_coalgebra(h: HopfCarrier) -> CheckResult:
    """Delta(P(x)) = sum P(x1) (x) P(x2)"""
    for a in h.basis():
        x = element(a)
        expected: Tensor = {}
        for (a1, a2), c in h.coproduct(x).items():
            for k1, e1 in p_map(h, element(a1)).items():
                for k2, e2 in p_map(h, element(a2)).items():
                    expected[(k1, k2)] = expected.get((k1, k2), ZERO) + c * e1 * e2
        expected = {k: c for k, c in expected.items() if c}
        if h.coproduct(p_map(h, x)) != expected:
            return check_failed({"element": str(a)})
    return check_passed()


def check_mh_matches_mloop(g: TrialityStructure) -> CheckResult:
    """MH(F[G]) and F[M(G)] have the same table under u -> S(u)"""
    h = group_algebra(g)
    mres = moufang_from_triality(g)
    mh = mh_subalgebra(h).mh
    carrier = {m: i for i, m in enumerate(mres.carrier)}
    mapping = {}
    for u in mh.keys:
        image = g.inv(u)
        if image not in carrier:
            return check_failed({"reason": "S(u) outside the M(G) carrier", "u": g.describe(u)})
        mapping[u] = carrier[image]
    if sorted(mapping.values()) != list(range(mres.loop.order)):
        return check_failed({"reason": "not a bijection", "mh_dim": len(mh.keys), "carrier": mres.loop.order})
    for a in mh.keys:
        for b in mh.keys:
            (k,) = mh.basis_mul(a, b)
            if mapping[k] != mres.loop.mul(mapping[a], mapping[b]):
                return check_failed({"u": g.describe(a), "v": g.describe(b)})
    return check_passed({"pairs": len(mh.keys) ** 2}, dim=len(mh.keys))


# Multiplication algebra of a loop algebra

def _lc(*ops: Perm) -> Perm:
    """Left composition X Y Z as a permutation: Z first"""
    return compose_all(*reversed(ops))


class MultOperators:
    """L_m, R_m and P_m = R_{S(m)} L_{S(m)} on the group-like basis of F[Q]"""

    def __init__(self, u: LoopAlgebra):
        q = u.loop
        self.u = u
        self.loop = q
        self.L = [q.left(m) for m in range(q.order)]
        self.R = [q.right(m) for m in range(q.order)]
        inv = u._inverse
        self.P = [_lc(self.R[inv[m]], self.L[inv[m]]) for m in range(q.order)]

    def get(self, family: str, m: int) -> Perm:
        return {"P": self.P, "L": self.L, "R": self.R}[family][m]


def check_mult_alg_identities(u: LoopAlgebra) -> CheckResult:
    """The operator identities i)-v) for P_m, L_m, R_m, m, n over the basis"""
    ops = MultOperators(u)
    q = u.loop
    n_el = q.order
    ident = tuple(range(n_el))
    inv = u._inverse
    parts: Dict[str, CheckResult] = {}

    unit_ok = all(ops.get(f, 0) == ident for f in "PLR")
    parts["i"] = check_passed() if unit_ok else check_failed({"relation": "P_1 = L_1 = R_1 = Id"})

    for m in range(n_el):
        if _lc(ops.P[m], ops.L[m], ops.R[m]) != ident:
            parts["ii"] = check_failed({"relation": "P_m L_m R_m = Id", "m": m + 1})
            break
    else:
        parts["ii"] = check_passed({"elements": n_el})

    families = {
        "iii": [
            ("P_m P_n P_m = P_{mnm}", ("P", "P", "P"), "P", "mnm"),
            ("L_m L_n L_m = L_{mnm}", ("L", "L", "L"), "L", "mnm"),
            ("R_m R_n R_m = R_{mnm}", ("R", "R", "R"), "R", "mnm"),
        ],
        "iv": [
            ("R_m P_n L_m = P_{S(m)n}", ("R", "P", "L"), "P", "S(m)n"),
            ("P_m L_n R_m = L_{S(m)n}", ("P", "L", "R"), "L", "S(m)n"),
            ("L_m R_n P_m = R_{S(m)n}", ("L", "R", "P"), "R", "S(m)n"),
        ],
        "v": [
            ("L_m P_n R_m = P_{nS(m)}", ("L", "P", "R"), "P", "nS(m)"),
            ("R_m L_n P_m = L_{nS(m)}", ("R", "L", "P"), "L", "nS(m)"),
            ("P_m R_n L_m = R_{nS(m)}", ("P", "R", "L"), "R", "nS(m)"),
        ],
    }

    def word(kind: str, m: int, n: int) -> int:
        if kind == "mnm":
            return q.mul(q.mul(m, n), m)
        if kind == "S(m)n":
            return q.mul(inv[m], n)
        return q.mul(n, inv[m])

    for part, relations in families.items():
        witness = None
        for name, (f1, f2, f3), target, kind in relations:
            for m in range(n_el):
                for n in range(n_el):
                    lhs = _lc(ops.get(f1, m), ops.get(f2, n), ops.get(f3, m))
                    if lhs != ops.get(target, word(kind, m, n)):
                        witness = {"relation": name, "m": m + 1, "n": n + 1}
                        break
                if witness:
                    break
            if witness:
                break
        parts[part] = check_failed(witness) if witness else check_passed({"pairs": n_el * n_el})

    return merge_results(parts)


# Doro(U) relations in a concrete target

class DoroAssignment:
    """P_m -> phi(m), L_m -> rho(phi(m)), R_m -> rho^2(phi(m)) for basis m of U"""

    def __init__(self, target: HopfCarrier, phi: Mapping[Hashable, Element]):
        self.target = target
        self.phi = {m: dict(v) for m, v in phi.items()}

    def image(self, family: str, m: Hashable) -> Element:
        base = self.phi[m]
        if family == "P":
            return base
        if family == "L":
            return self.target.rho(base)
        return self.target.s3(base, "rr")

    def image_of(self, family: str, u: Mapping[Hashable, Rational]) -> Element:
        return add(*(scale(c, self.image(family, m)) for m, c in u.items())) if u else {}


DORO_BLOCK: Tuple[Tuple[str, Tuple[str, str, str], str, str], ...] = (
    ("P_m P_n P_m = P_{m1 n m2}", ("P", "P", "P"), "P", "mnm"),
    ("L_m L_n L_m = L_{m1 n m2}", ("L", "L", "L"), "L", "mnm"),
    ("R_m R_n R_m = R_{m1 n m2}", ("R", "R", "R"), "R", "mnm"),
    ("R_m P_n L_m = P_{S(m)n}", ("R", "P", "L"), "P", "S(m)n"),
    ("P_m L_n R_m = L_{S(m)n}", ("P", "L", "R"), "L", "S(m)n"),
    ("L_m R_n P_m = R_{S(m)n}", ("L", "R", "P"), "R", "S(m)n"),
    ("L_m P_n R_m = P_{nS(m)}", ("L", "P", "R"), "P", "nS(m)"),
    ("R_m L_n P_m = L_{nS(m)}", ("R", "L", "P"), "L", "nS(m)"),
    ("P_m R_n L_m = R_{nS(m)}", ("P", "R", "L"), "R", "nS(m)"),
)


def verify_doro_target(u: HopfCarrier, target: HopfCarrier, phi: Mapping[Hashable, Element]) -> CheckResult:
    """Every defining relation of Doro(U) holds in the target under the assignment built from phi"""
    assign = DoroAssignment(target, phi)
    t = target
    keys = list(u.basis())
    parts: Dict[str, CheckResult] = {}

    unit = u.unit_key
    if not all(assign.image(f, unit) == t.unit() for f in "PLR"):
        parts["unit"] = check_failed({"relation": "P_1 = L_1 = R_1 = 1"})
    else:
        parts["unit"] = check_passed()

    witness = None
    for m in keys:
        total = []
        for (m1, m2, m3), c in u.coproduct_n(element(m), 3).items():
            total.append(scale(c, t.product(assign.image("P", m1), assign.image("L", m2), assign.image("R", m3))))
        if add(*total) != scale(u.basis_counit(m), t.unit()):
            witness = {"relation": "P_m1 L_m2 R_m3 = eps(m) 1", "m": str(m)}
            break
    parts["counit"] = check_failed(witness) if witness else check_passed({"elements": len(keys)})

    witness = None
    for name, (f1, f2, f3), target_family, kind in DORO_BLOCK:
        for m in keys:
            for n in keys:
                lhs, rhs = [], []
                for (m1, m2), c in u.coproduct(element(m)).items():
                    lhs.append(scale(c, t.product(assign.image(f1, m1), assign.image(f2, n), assign.image(f3, m2))))
                    if kind == "mnm":
                        rhs.append(scale(c, assign.image_of(target_family,
                                                            u.mul(u.mul(element(m1), element(n)), element(m2)))))
                if kind == "S(m)n":
                    rhs.append(assign.image_of(target_family, u.mul(u.antipode(element(m)), element(n))))
                elif kind == "nS(m)":
                    rhs.append(assign.image_of(target_family, u.mul(element(n), u.antipode(element(m)))))
                if add(*lhs) != add(*rhs):
                    witness = {"relation": name, "m": str(m), "n": str(n)}
                    break
            if witness:
                break
        if witness:
            break
    parts["relations"] = check_failed(witness) if witness else check_passed(
        {"relations": len(DORO_BLOCK), "pairs": len(keys) ** 2})

    witness = None
    for m in keys:
        s_m = u.antipode(element(m))
        checks = (
            ("sigma(P_m) = P_{S(m)}", t.sigma(assign.image("P", m)), assign.image_of("P", s_m)),
            ("sigma(L_m) = R_{S(m)}", t.sigma(assign.image("L", m)), assign.image_of("R", s_m)),
            ("sigma(R_m) = L_{S(m)}", t.sigma(assign.image("R", m)), assign.image_of("L", s_m)),
            ("rho(R_m) = P_m", t.rho(assign.image("R", m)), assign.image("P", m)),
        )
        for name, lhs, rhs in checks:
            if lhs != rhs:
                witness = {"relation": name, "m": str(m)}
                break
        if witness:
            break
    parts["equivariant"] = check_failed(witness) if witness else check_passed({"elements": len(keys)})

    # m -> P_m is injective and multiplicative into MH(target)
    images = [assign.image("P", m) for m in keys]
    parts["injective"] = (
        check_passed() if sparse_rank(images) == len(keys)
        else check_failed({"rank": sparse_rank(images), "dim": len(keys)})
    )
    witness = None
    for a in keys:
        for b in keys:
            lhs = assign.image_of("P", u.mul(element(a), element(b)))
            if lhs != star(t, assign.image("P", a), assign.image("P", b)):
                witness = {"m": str(a), "n": str(b)}
                break
        if witness:
            break
    parts["multiplicative"] = check_failed(witness) if witness else check_passed()

    result = merge_results(parts)
    if not result["passed"]:
        logger.warning(f"Doro relations fail in {t.name}: {result['witness']}")
    return result


def atp_target_assignment(q: FiniteLoop, atp) -> Dict[int, Element]:
    """phi(b) = (L_b^-1, U_b^-1, L_b) into F[Atp(Q)]"""
    members = set(atp.elements())
    phi = {}
    for b in range(q.order):
        ops = mult_ops(q, b)
        triple = (invert(ops.L), invert(ops.U), ops.L)
        if triple not in members:
            raise VerificationError(f"(L_b^-1, U_b^-1, L_b) for b = {b + 1} is not in Atp")
        phi[b] = element(triple)
    return phi


def mloop_target_assignment(g: TrialityStructure) -> Tuple[LoopAlgebra, Dict[int, Element]]:
    """U = F[M(G)] into F[G] with phi(m) = m^-1"""
    mres = moufang_from_triality(g)
    u = LoopAlgebra(mres.loop)
    phi = {i: element(g.inv(m)) for i, m in enumerate(mres.carrier)}
    return u, phi


def swap_assignment(phi: Mapping[Hashable, Element], a: Hashable, b: Hashable) -> Dict[Hashable, Element]:
    out = dict(phi)
    out[a], out[b] = phi[b], phi[a]
    return out
