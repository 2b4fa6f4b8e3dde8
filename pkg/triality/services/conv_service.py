"""
Conv Service - convolution loops and Atp_C(U) for group-like coalgebras

This service handles the coalgebra-morphism constructions over U = FQ for a
Moufang loop Q and a group-like coalgebra C on k points: the convolution loop
Mor(C, FQ), the convolution algebra Hom(C, End(U)), the group G(C, U), the
lifted operators L_A, R_A, U_A, A^S, and the group Atp_C(U) with its triality.

Operators act on the right as permutations (compose(f, g) applies f first).
For group-like C every member of G(C, FQ) permutes the group-like basis Q at
each point, so members are stored as one permutation of Q per point.
"""

from __future__ import annotations

import itertools
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from triality.config import config
from triality.services.loop_service import (
    FiniteLoop,
    Perm,
    check_loop,
    check_moufang,
    compose,
    compose_all,
    identity_perm,
    inversion_map,
    invert,
)
from triality.services.qcore_service import ONE, ZERO, QMatrix, rank, unit_vector
from triality.utils.errors import CapExceededError, DimensionMismatchError, UnsupportedInputError
from triality.utils.helpers import CheckResult, check_failed, check_passed, index_tuples, merge_results, setup_logger

# Setup logging
logger = setup_logger(__name__)

Morphism = Tuple[int, ...]
GElement = Tuple[Perm, ...]
ConvTriple = Tuple[GElement, GElement, GElement]


class GroupLikeCoalgebra(NamedTuple):
    """k points x with Delta(x) = x (x) x and eps(x) = 1"""

    points: int

    def coproduct(self, x: int) -> List[Tuple[int, int]]:
        return [(x, x)]


# Mor(C, FQ)

def morphisms(c: GroupLikeCoalgebra, q: FiniteLoop) -> List[Morphism]:
    """Coalgebra morphisms C -> FQ; for group-like C these are the maps X -> Q"""
    return list(itertools.product(range(q.order), repeat=c.points))


def morphism_product(c: GroupLikeCoalgebra, q: FiniteLoop, f: Morphism, g: Morphism) -> Morphism:
    """c(f*g) = sum (c1 f)(c2 g)"""
    out = []
    for x in range(c.points):
        (x1, x2), = c.coproduct(x)
        out.append(q.mul(f[x1], g[x2]))
    return tuple(out)


class ConvLoopResult(NamedTuple):
    loop: FiniteLoop
    morphisms: List[Morphism]
    result: CheckResult


def convolution_loop(c: GroupLikeCoalgebra, q: FiniteLoop, cap: Optional[int] = None) -> ConvLoopResult:
    """Mor(C, FQ) under convolution, tabulated; unit is the constant map to 1"""
    cap = config.MAX_GROUP_ORDER if cap is None else cap
    size = q.order ** c.points
    if size > cap:
        raise CapExceededError(f"|Q|^|X| = {size} exceeds the cap {cap}")
    mors = morphisms(c, q)
    index = {f: i for i, f in enumerate(mors)}
    table = [[index[morphism_product(c, q, f, g)] for g in mors] for f in mors]
    loop = check_loop(table, f"Mor({c.points},{q.name})")

    parts: Dict[str, CheckResult] = {"moufang": check_moufang(loop)}
    # pointwise product on Q^X
    for f, g in itertools.product(mors[:min(len(mors), 64)], repeat=2):
        pointwise = tuple(q.mul(a, b) for a, b in zip(f, g))
        if mors[loop.mul(index[f], index[g])] != pointwise:
            parts["pointwise"] = check_failed({"f": [v + 1 for v in f], "g": [v + 1 for v in g]})
            break
    else:
        parts["pointwise"] = check_passed()
    result = merge_results(parts)
    result["details"].update(order=loop.order, points=c.points)
    logger.info(f"Convolution loop {loop.name} of order {loop.order}")
    return ConvLoopResult(loop, mors, result)


# Hom(C, End(U)) as matrices: column y is the image of the basis element y

class ConvOperator(NamedTuple):
    maps: Tuple[QMatrix, ...]


class ConvAlgebra(NamedTuple):
    identity: ConvOperator
    product: Callable[[ConvOperator, ConvOperator], ConvOperator]


def conv_algebra_ops(c: GroupLikeCoalgebra, n: int) -> ConvAlgebra:
    """Identity c -> eps(c) Id and (A*B)_c = sum A_c1 B_c2, B applied after A"""
    identity = ConvOperator(tuple(QMatrix.identity(n) for _ in range(c.points)))

    def product(a: ConvOperator, b: ConvOperator) -> ConvOperator:
        maps = []
        for x in range(c.points):
            (x1, x2), = c.coproduct(x)
            maps.append(b.maps[x2] @ a.maps[x1])
        return ConvOperator(tuple(maps))

    return ConvAlgebra(identity, product)


def random_operator(c: GroupLikeCoalgebra, n: int, rng: np.random.Generator) -> ConvOperator:
    return ConvOperator(tuple(QMatrix(rng.integers(-2, 3, size=(n, n)).tolist()) for _ in range(c.points)))


def check_conv_algebra(c: GroupLikeCoalgebra, n: int, seed: Optional[int] = None, samples: int = 100) -> CheckResult:
    """Identity laws and associativity on seeded random operator triples"""
    seed = config.SEED if seed is None else seed
    alg = conv_algebra_ops(c, n)
    rng = np.random.default_rng(seed)
    for sample in range(samples):
        a, b, d = (random_operator(c, n, rng) for _ in range(3))
        if alg.product(a, alg.identity) != a or alg.product(alg.identity, a) != a:
            return check_failed({"sample": sample, "law": "identity"})
        if alg.product(alg.product(a, b), d) != alg.product(a, alg.product(b, d)):
            return check_failed({"sample": sample, "law": "associativity"})
    return check_passed({"triples": samples})


def operator_from_g(a: GElement, n: int) -> ConvOperator:
    return ConvOperator(tuple(QMatrix.from_columns([unit_vector(n, p[y]) for y in range(n)], n) for p in a))


def g_membership(a: ConvOperator) -> CheckResult:
    """Invertible, eps(y A_x) = 1 and Delta(y A_x) = y A_x (x) y A_x on the group-like basis"""
    for x, m in enumerate(a.maps):
        n = m.rows
        if rank(m) < n:
            return check_failed({"point": x + 1, "condition": "invertible"})
        for y in range(n):
            image = m.column(y)
            if sum(image, ZERO) != ONE:
                return check_failed({"point": x + 1, "basis": y + 1, "condition": "counit"})
            support = [k for k, v in enumerate(image) if v]
            # Delta(v) = sum v_k k (x) k equals v (x) v only for a single coefficient 1
            if len(support) != 1 or image[support[0]] != ONE:
                return check_failed({"point": x + 1, "basis": y + 1, "condition": "coproduct",
                                     "support": [k + 1 for k in support]})
    return check_passed({"points": len(a.maps)})


def to_g_element(a: ConvOperator) -> GElement:
    verdict = g_membership(a)
    if not verdict["passed"]:
        raise UnsupportedInputError(f"operator is not in G(C, U): {verdict['witness']}")
    perms = []
    for m in a.maps:
        perms.append(tuple(next(k for k, v in enumerate(m.column(y)) if v) for y in range(m.rows)))
    return tuple(perms)


# G(C, FQ) group law

def g_identity(c: GroupLikeCoalgebra, q: FiniteLoop) -> GElement:
    return tuple(identity_perm(q.order) for _ in range(c.points))


def g_product(a: GElement, b: GElement) -> GElement:
    return tuple(compose(x, y) for x, y in zip(a, b))


def g_product_all(*factors: GElement) -> GElement:
    out = factors[0]
    for f in factors[1:]:
        out = g_product(out, f)
    return out


def g_inverse(a: GElement) -> GElement:
    return tuple(invert(x) for x in a)


class ConvContext:
    """Per-loop operator tables shared by the lifts"""

    def __init__(self, c: GroupLikeCoalgebra, q: FiniteLoop):
        if c.points < 1:
            raise DimensionMismatchError("a coalgebra needs at least one point")
        self.c = c
        self.q = q
        self.J = inversion_map(q)
        self.L = [q.left(x) for x in range(q.order)]
        self.R = [q.right(x) for x in range(q.order)]
        self.U = [compose(self.L[x], self.R[x]) for x in range(q.order)]

    def lift(self, family: str, a: GElement) -> GElement:
        """c -> L_{1 A_c} (or R, U)"""
        table = {"L": self.L, "R": self.R, "U": self.U}[family]
        return tuple(table[p[0]] for p in a)

    def lift_inverse(self, family: str, a: GElement) -> GElement:
        """(L^-1)_A: c -> L_{(1 A_c) S}"""
        table = {"L": self.L, "R": self.R, "U": self.U}[family]
        return tuple(table[self.J[p[0]]] for p in a)

    def antipode_conj(self, a: GElement) -> GElement:
        """A^S: c -> S A_c S"""
        return tuple(compose_all(self.J, p, self.J) for p in a)

    def from_morphism(self, family: str, theta: Morphism) -> GElement:
        """L_theta: c -> L_{c theta}"""
        table = {"L": self.L, "R": self.R, "U": self.U}[family]
        return tuple(table[v] for v in theta)


class LiftedOps(NamedTuple):
    L: GElement
    R: GElement
    U: GElement
    S: GElement


def lifted_ops(ctx: ConvContext, a: GElement) -> Tuple[LiftedOps, CheckResult]:
    """L_A, R_A, U_A and A^S, with the inverse identities and the involution checked"""
    lifts = LiftedOps(ctx.lift("L", a), ctx.lift("R", a), ctx.lift("U", a), ctx.antipode_conj(a))
    parts: Dict[str, CheckResult] = {}
    for family, lifted in zip("LRU", lifts[:3]):
        ok = g_inverse(lifted) == ctx.lift_inverse(family, a)
        parts[f"{family}_inverse"] = check_passed() if ok else check_failed({"family": family})
    parts["involution"] = (
        check_passed() if ctx.antipode_conj(lifts.S) == a else check_failed({"relation": "(A^S)^S = A"})
    )
    return lifts, merge_results(parts)


def check_antipode_automorphism(ctx: ConvContext, elements: Sequence[GElement],
                                seed: Optional[int] = None) -> CheckResult:
    """(A*B)^S = A^S * B^S and (A^S)^S = A on sampled pairs"""
    seed = config.SEED if seed is None else seed
    for i, j in index_tuples(len(elements), 2, seed, samples=config.CONV_SAMPLES):
        a, b = elements[i], elements[j]
        if ctx.antipode_conj(g_product(a, b)) != g_product(ctx.antipode_conj(a), ctx.antipode_conj(b)):
            return check_failed({"pair": [i + 1, j + 1], "relation": "(AB)^S = A^S B^S"})
        if ctx.antipode_conj(ctx.antipode_conj(a)) != a:
            return check_failed({"element": i + 1, "relation": "(A^S)^S = A"})
    return check_passed({"elements": len(elements)})


# Atp_C(U)

def atpc_membership(ctx: ConvContext, t: ConvTriple) -> CheckResult:
    """(xy) A_c = sum (x B_c1)(y C_c2) on all basis pairs and points"""
    T = ctx.q.table
    a, b, c = t
    for x in range(ctx.c.points):
        (x1, x2), = ctx.c.coproduct(x)
        A = np.asarray(a[x], dtype=np.intp)
        B = np.asarray(b[x1], dtype=np.intp)
        C = np.asarray(c[x2], dtype=np.intp)
        lhs = A[T]
        rhs = T[B[:, None], C[None, :]]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            u, v = (int(w) for w in bad[0])
            return check_failed({"point": x + 1, "x": u + 1, "y": v + 1})
    return check_passed({"pairs": ctx.q.order ** 2 * ctx.c.points})


def canonical_conv_triples(ctx: ConvContext, a: GElement) -> Dict[str, ConvTriple]:
    lifts = LiftedOps(ctx.lift("L", a), ctx.lift("R", a), ctx.lift("U", a), ctx.antipode_conj(a))
    return {
        "left": (lifts.L, lifts.U, g_inverse(lifts.L)),
        "right": (lifts.R, g_inverse(lifts.R), lifts.U),
        "middle": (lifts.U, lifts.L, lifts.R),
    }


def atpc_product(s: ConvTriple, t: ConvTriple) -> ConvTriple:
    return tuple(g_product(x, y) for x, y in zip(s, t))


def atpc_inverse(t: ConvTriple) -> ConvTriple:
    return tuple(g_inverse(x) for x in t)


def atpc_rho(ctx: ConvContext, t: ConvTriple) -> ConvTriple:
    """(A, B, C)^rho = (B^S, C, A^S)"""
    a, b, c = t
    return ctx.antipode_conj(b), c, ctx.antipode_conj(a)


def atpc_sigma(ctx: ConvContext, t: ConvTriple) -> ConvTriple:
    """(A, B, C)^sigma = (C, B^S, A)"""
    a, b, c = t
    return c, ctx.antipode_conj(b), a


def _triality_equalities(ctx: ConvContext, t: ConvTriple) -> Optional[str]:
    a, b, c = t
    inv, s = g_inverse, ctx.antipode_conj
    one = g_identity(ctx.c, ctx.q)
    words = {
        "A^-1 C B^-S B C^-S A^S": (inv(a), c, s(inv(b)), b, s(inv(c)), s(a)),
        "B^-1 B^S C^-1 A A^-S C^S": (inv(b), s(b), inv(c), a, s(inv(a)), s(c)),
        "C^-1 A A^-S C^S B^-1 B^S": (inv(c), a, s(inv(a)), s(c), inv(b), s(b)),
    }
    for name, factors in words.items():
        if g_product_all(*factors) != one:
            return name
    return None


def _m_element(ctx: ConvContext, t: ConvTriple) -> ConvTriple:
    """t^-1 t^sigma"""
    return atpc_product(atpc_inverse(t), atpc_sigma(ctx, t))


def m_product(ctx: ConvContext, m: ConvTriple, n: ConvTriple) -> ConvTriple:
    """m . n = m^(-rho) n m^(-rho^2)"""
    m_inv = atpc_inverse(m)
    left = atpc_rho(ctx, m_inv)
    right = atpc_rho(ctx, atpc_rho(ctx, m_inv))
    return atpc_product(atpc_product(left, n), right)


def m_triple(ctx: ConvContext, b: GElement) -> ConvTriple:
    """(L_B^-1, U_B^-1, L_B)"""
    lb = ctx.lift("L", b)
    return g_inverse(lb), g_inverse(ctx.lift("U", b)), lb


def _check_sample(ctx: ConvContext, t: ConvTriple) -> Optional[Dict[str, str]]:
    """Every per-element property; the name of the first failing one"""
    a, b, c = t
    rho = atpc_rho(ctx, t)
    sigma = atpc_sigma(ctx, t)
    if not atpc_membership(ctx, t)["passed"]:
        return {"property": "membership"}
    if not atpc_membership(ctx, rho)["passed"]:
        return {"property": "rho image membership"}
    if not atpc_membership(ctx, sigma)["passed"]:
        return {"property": "sigma image membership"}
    if atpc_rho(ctx, atpc_rho(ctx, rho)) != t or atpc_sigma(ctx, sigma) != t:
        return {"property": "rho^3 = sigma^2 = 1"}
    if atpc_rho(ctx, sigma) != atpc_sigma(ctx, atpc_rho(ctx, rho)):
        return {"property": "sigma rho = rho^2 sigma"}
    failing = _triality_equalities(ctx, t)
    if failing:
        return {"property": "triality equality", "word": failing}
    # A = B * R_C = C * L_B
    if a != g_product(b, ctx.lift("R", c)) or a != g_product(c, ctx.lift("L", b)):
        return {"property": "A = B*R_C = C*L_B"}
    # (A,B,C) = (D',D,D')(R_B^-1, R_B, U_B^-1)
    r_b, u_b = ctx.lift("R", b), ctx.lift("U", b)
    d_prime = g_product(a, r_b)
    if d_prime != g_product(c, u_b):
        return {"property": "A*R_B = C*U_B"}
    d = g_product(b, g_inverse(r_b))
    head = (d_prime, d, d_prime)
    if not atpc_membership(ctx, head)["passed"]:
        return {"property": "(D',D,D') membership"}
    if atpc_product(head, (g_inverse(r_b), r_b, g_inverse(u_b))) != t:
        return {"property": "decomposition"}
    if _m_element(ctx, t) != m_triple(ctx, b):
        return {"property": "t^-1 t^sigma = (L_B^-1, U_B^-1, L_B)"}
    return None


class ConvTrialityReport(NamedTuple):
    canonical: int
    products: int
    result: CheckResult


def atpc_triality_checks(c: GroupLikeCoalgebra, q: FiniteLoop, samples: Optional[int] = None,
                         seed: Optional[int] = None) -> ConvTrialityReport:
    """Triality of Atp_C(FQ) on canonical triples and seeded products of them"""
    samples = config.CONV_SAMPLES if samples is None else samples
    seed = config.SEED if seed is None else seed
    ctx = ConvContext(c, q)
    mors = morphisms(c, q)
    thetas = [ctx.from_morphism("L", theta) for theta in mors]

    canonical: List[ConvTriple] = []
    parts: Dict[str, CheckResult] = {}
    witness = None
    for idx, a in enumerate(thetas):
        _, lift_check = lifted_ops(ctx, a)
        if not lift_check["passed"] and witness is None:
            witness = {"morphism": [v + 1 for v in mors[idx]], **lift_check["witness"]}
        canonical.extend(canonical_conv_triples(ctx, a).values())
    parts["lifts"] = check_failed(witness) if witness else check_passed({"lifts": len(thetas)})

    rng = np.random.default_rng(seed)
    products: List[ConvTriple] = []
    for _ in range(samples):
        length = int(rng.integers(2, 5))
        word = [canonical[int(i)] for i in rng.integers(0, len(canonical), size=length)]
        t = word[0]
        for s in word[1:]:
            t = atpc_product(t, s)
        products.append(t)

    witness = None
    for kind, elements in (("canonical", canonical), ("product", products)):
        for idx, t in enumerate(elements):
            bad = _check_sample(ctx, t)
            if bad:
                witness = {"kind": kind, "index": idx + 1, **bad}
                break
        if witness:
            break
    parts["triality"] = check_failed(witness) if witness else check_passed(
        {"canonical": len(canonical), "products": len(products)})

    # L_B . L_B' = L_{L_B * R_B'} on the B-components of the samples
    bs = [t[1] for t in canonical + products]
    witness = None
    for i, j in index_tuples(len(bs), 2, seed, samples=samples):
        b, b2 = bs[i], bs[j]
        product = m_product(ctx, m_triple(ctx, b), m_triple(ctx, b2))
        target = m_triple(ctx, g_product(ctx.lift("L", b), ctx.lift("R", b2)))
        if product != target:
            witness = {"pair": [i + 1, j + 1]}
            break
    parts["product_formula"] = check_failed(witness) if witness else check_passed()

    parts["antipode_automorphism"] = check_antipode_automorphism(ctx, [t[0] for t in canonical + products], seed)
    parts["morphism_isomorphism"] = check_morphism_isomorphism(ctx, seed)

    result = merge_results(parts)
    result["details"].update(points=c.points, loop=q.name, samples=samples, seed=seed)
    if not result["passed"]:
        logger.warning(f"Atp_C triality failed: {result['witness']}")
    logger.info(f"Atp_C({q.name}) on {c.points} points: {len(canonical)} canonical, {len(products)} products")
    return ConvTrialityReport(len(canonical), len(products), result)


def check_morphism_isomorphism(ctx: ConvContext, seed: Optional[int] = None) -> CheckResult:
    """theta -> L_theta is injective and carries convolution to the M-product"""
    seed = config.SEED if seed is None else seed
    mors = morphisms(ctx.c, ctx.q)
    images = [m_triple(ctx, ctx.from_morphism("L", theta)) for theta in mors]
    if len(set(images)) != len(mors):
        return check_failed({"reason": "theta -> L_theta is not injective"})
    index = {t: i for i, t in enumerate(images)}
    pairs = 0
    for i, j in index_tuples(len(mors), 2, seed):
        pairs += 1
        product = m_product(ctx, images[i], images[j])
        expected = morphism_product(ctx.c, ctx.q, mors[i], mors[j])
        if index.get(product) is None or mors[index[product]] != expected:
            return check_failed({"theta": [v + 1 for v in mors[i]], "theta'": [v + 1 for v in mors[j]]})
    return check_passed({"pairs": pairs}, morphisms=len(mors))
