"""
Malcev Service - nonassociative algebras by structure constants

This service handles finite-dimensional algebras over Q given by structure
constants: Malcev and Jacobi identities, the generalized alternative nucleus,
generalized Cayley algebras by Cayley-Dickson doubling, the orthogonal Lie
algebra o(O,n) = Der(O) + L_{O0} + R_{O0} with its triality automorphisms, and
the operator realization of Lie(m) for m = O0 generated by the left and right
multiplications.

Matrices act on column vectors from the left; rho sigma means sigma first.
"""

from __future__ import annotations

import itertools
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from triality.services.qcore_service import (
    ONE,
    ZERO,
    CoordinateSystem,
    QMatrix,
    Rational,
    Subspace,
    Vector,
    bracket_closure,
    commutator,
    kernel,
    null_space,
    q,
    unit_vector,
    zero_vector,
)
from triality.utils.constants import Limits
from triality.utils.errors import DimensionMismatchError, FormatError, UnsupportedInputError, VerificationError
from triality.utils.helpers import CheckResult, check_failed, check_passed, format_rational, merge_results, setup_logger

# Setup logging
logger = setup_logger(__name__)

Terms = Dict[int, Rational]


class StructureConstants:
    """e_i e_j = sum_k c[i][j][k] e_k, stored sparsely"""

    def __init__(self, dim: int, product: Mapping[Tuple[int, int], Mapping[int, Any]],
                 bracket: bool = False, name: str = "A"):
        self.dim = dim
        self.bracket = bracket
        self.name = name
        table: Dict[Tuple[int, int], Terms] = {}
        for (i, j), terms in product.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise DimensionMismatchError(f"product index ({i + 1},{j + 1}) outside 1..{dim}")
            cleaned = {}
            for k, c in terms.items():
                if not 0 <= k < dim:
                    raise DimensionMismatchError(f"result index {k + 1} outside 1..{dim}")
                if c:
                    cleaned[k] = q(c)
            if cleaned:
                table[(i, j)] = cleaned
        self.table = table

    @classmethod
    def from_bracket_entries(cls, dim: int, entries: Sequence[Tuple[int, int, Mapping[int, Any]]],
                             name: str = "g") -> "StructureConstants":
        """Anticommutative completion of the listed brackets; missing pairs are zero"""
        product: Dict[Tuple[int, int], Terms] = {}
        for i, j, terms in entries:
            if i == j:
                if any(terms.values()):
                    raise FormatError(f"bracket [e{i + 1}, e{i + 1}] must vanish")
                continue
            given = {k: q(c) for k, c in terms.items() if c}
            negated = {k: -c for k, c in given.items()}
            for key, value in (((i, j), given), ((j, i), negated)):
                if key in product and product[key] != value:
                    raise FormatError(f"inconsistent bracket for pair ({key[0] + 1},{key[1] + 1})")
                product[key] = value
        return cls(dim, product, bracket=True, name=name)

    def entries(self) -> List[Tuple[int, int, Terms]]:
        """Nonzero products; for brackets only pairs with i < j"""
        return [
            (i, j, dict(terms)) for (i, j), terms in sorted(self.table.items())
            if not self.bracket or i < j
        ]

    def basis_product(self, i: int, j: int) -> Terms:
        return dict(self.table.get((i, j), {}))

    def basis(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def mul(self, u: Sequence[Rational], v: Sequence[Rational]) -> Vector:
        out = [ZERO] * self.dim
        left = [(i, a) for i, a in enumerate(u) if a]
        right = [(j, b) for j, b in enumerate(v) if b]
        for i, a in left:
            for j, b in right:
                terms = self.table.get((i, j))
                if terms:
                    ab = a * b
                    for k, c in terms.items():
                        out[k] += ab * c
        return tuple(out)

    def associator(self, u, v, w) -> Vector:
        """(uv)w - u(vw)"""
        return tuple(a - b for a, b in zip(self.mul(self.mul(u, v), w), self.mul(u, self.mul(v, w))))

    def left_matrix(self, u: Sequence[Rational]) -> QMatrix:
        return QMatrix.from_columns([self.mul(u, self.basis(j)) for j in range(self.dim)], self.dim)

    def right_matrix(self, u: Sequence[Rational]) -> QMatrix:
        return QMatrix.from_columns([self.mul(self.basis(j), u) for j in range(self.dim)], self.dim)

    def is_anticommutative(self) -> bool:
        for i in range(self.dim):
            if self.table.get((i, i)):
                return False
            for j in range(i + 1, self.dim):
                ij, ji = self.table.get((i, j), {}), self.table.get((j, i), {})
                if ij != {k: -c for k, c in ji.items()}:
                    return False
        return True

    def __repr__(self) -> str:
        return f"StructureConstants({self.name}, dim={self.dim})"


def _add(u: Sequence[Rational], v: Sequence[Rational]) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def _sub(u: Sequence[Rational], v: Sequence[Rational]) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def _combination(coefficients: Sequence[Rational], vectors: Sequence[Sequence[Rational]], n: int) -> Vector:
    out = [ZERO] * n
    for c, v in zip(coefficients, vectors):
        if c:
            for k, a in enumerate(v):
                if a:
                    out[k] += c * a
    return tuple(out)


def _vector_text(v: Sequence[Rational]) -> List[str]:
    return [format_rational(a) for a in v]


def jacobian(sc: StructureConstants, x, y, z) -> Vector:
    """Jac(x,y,z) = [[x,y],z] + [[y,z],x] + [[z,x],y]"""
    m = sc.mul
    return _add(_add(m(m(x, y), z), m(m(y, z), x)), m(m(z, x), y))


def check_jacobi(sc: StructureConstants) -> CheckResult:
    """Jacobi on basis triples i < j < k (the jacobian is alternating)"""
    e = sc.basis
    for i, j, k in itertools.combinations(range(sc.dim), 3):
        jac = jacobian(sc, e(i), e(j), e(k))
        if any(jac):
            return check_failed({"x": i + 1, "y": j + 1, "z": k + 1, "jacobian": _vector_text(jac)})
    return check_passed({"triples": sc.dim * (sc.dim - 1) * (sc.dim - 2) // 6})


def is_lie(sc: StructureConstants) -> bool:
    return sc.is_anticommutative() and check_jacobi(sc)["passed"]


def check_malcev(sc: StructureConstants) -> CheckResult:
    """Linearized Malcev identity on basis 4-tuples:

    J(x,y,[w,z]) + J(w,y,[x,z]) = [J(x,y,z),w] + [J(w,y,z),x]
    """
    if not sc.is_anticommutative():
        raise UnsupportedInputError(f"{sc.name} is not anticommutative")
    n = sc.dim
    e = sc.basis
    jac = {
        (i, j, k): jacobian(sc, e(i), e(j), e(k))
        for i in range(n) for j in range(n) for k in range(n)
    }

    def jac_with(x: int, y: int, v: Sequence[Rational]) -> Vector:
        return _combination(v, [jac[(x, y, k)] for k in range(n)], n)

    brackets = {(i, j): sc.mul(e(i), e(j)) for i in range(n) for j in range(n)}
    for x, y, w, z in itertools.product(range(n), repeat=4):
        lhs = _add(jac_with(x, y, brackets[(w, z)]), jac_with(w, y, brackets[(x, z)]))
        rhs = _add(sc.mul(jac[(x, y, z)], e(w)), sc.mul(jac[(w, y, z)], e(x)))
        if lhs != rhs:
            logger.info(f"Malcev identity fails on {sc.name} at {(x + 1, y + 1, w + 1, z + 1)}")
            return check_failed(
                {"x": x + 1, "y": y + 1, "w": w + 1, "z": z + 1,
                 "lhs": _vector_text(lhs), "rhs": _vector_text(rhs)},
                {"tuples": n ** 4},
            )
    return check_passed({"tuples": n ** 4})


def commutator_algebra(sc: StructureConstants) -> StructureConstants:
    """[x,y] = xy - yx"""
    product = {}
    for i in range(sc.dim):
        for j in range(sc.dim):
            terms = dict(sc.table.get((i, j), {}))
            for k, c in sc.table.get((j, i), {}).items():
                terms[k] = terms.get(k, ZERO) - c
            product[(i, j)] = terms
    return StructureConstants(sc.dim, product, bracket=True, name=f"{sc.name}^-")


def restrict_to_subspace(sc: StructureConstants, sub: Subspace) -> StructureConstants:
    """Structure constants on the echelon basis of a subalgebra"""
    product = {}
    for i, u in enumerate(sub.basis):
        for j, v in enumerate(sub.basis):
            coords = sub.coordinates(sc.mul(u, v))
            if coords is None:
                raise DimensionMismatchError("subspace is not closed under the product")
            product[(i, j)] = dict(enumerate(coords))
    return StructureConstants(sub.dim, product, bracket=sc.bracket, name=f"{sc.name}|sub")


def nalt(sc: StructureConstants) -> Subspace:
    """{a : (a,x,y) = -(x,a,y) = (x,y,a) for all x, y}"""
    n = sc.dim
    e = sc.basis
    rows: List[Dict[int, Rational]] = []
    columns = []
    for a in range(n):
        column = []
        for x in range(n):
            for y in range(n):
                axy = sc.associator(e(a), e(x), e(y))
                xay = sc.associator(e(x), e(a), e(y))
                xya = sc.associator(e(x), e(y), e(a))
                column.extend(_add(axy, xay))
                column.extend(_add(xay, xya))
        columns.append(column)
    for r in range(len(columns[0])):
        row = {a: columns[a][r] for a in range(n) if columns[a][r]}
        if row:
            rows.append(row)
    return null_space(rows, n)


def direct_sum(a: StructureConstants, b: StructureConstants) -> StructureConstants:
    shift = a.dim
    product = dict(a.table)
    for (i, j), terms in b.table.items():
        product[(i + shift, j + shift)] = {k + shift: c for k, c in terms.items()}
    return StructureConstants(a.dim + b.dim, product, bracket=a.bracket and b.bracket,
                              name=f"{a.name}+{b.name}")


def nonflexible_algebra() -> StructureConstants:
    """f1 f1 = f2, f2 f1 = f1, other products zero"""
    return StructureConstants(2, {(0, 0): {1: 1}, (1, 0): {0: 1}}, name="N2")


def sl2() -> StructureConstants:
    """Basis h, e, f with [h,e] = 2e, [h,f] = -2f, [e,f] = h"""
    return StructureConstants.from_bracket_entries(
        3, [(0, 1, {1: 2}), (0, 2, {2: -2}), (1, 2, {0: 1})], name="sl2"
    )


def nonabelian_2d() -> StructureConstants:
    """[x, y] = y"""
    return StructureConstants.from_bracket_entries(2, [(0, 1, {1: 1})], name="b2")


def perturb(sc: StructureConstants, i: int, j: int, k: int, delta: Any) -> StructureConstants:
    """Add delta to c[i][j][k] (and subtract it from c[j][i][k] for brackets)"""
    product = {key: dict(terms) for key, terms in sc.table.items()}
    product.setdefault((i, j), {})
    product[(i, j)][k] = product[(i, j)].get(k, ZERO) + q(delta)
    if sc.bracket and i != j:
        product.setdefault((j, i), {})
        product[(j, i)][k] = product[(j, i)].get(k, ZERO) - q(delta)
    return StructureConstants(sc.dim, product, bracket=sc.bracket, name=f"{sc.name}~")


# Generalized Cayley algebras

def _double(table: Dict[Tuple[int, int], Terms], conj: List[int], gamma: Rational):
    """(a,b)(c,d) = (ac + gamma conj(d) b, da + b conj(c)); conj(a,b) = (conj a, -b)"""
    m = len(conj)
    doubled: Dict[Tuple[int, int], Terms] = {}
    for i in range(m):
        for j in range(m):
            ij = table.get((i, j), {})
            ji = table.get((j, i), {})
            doubled[(i, j)] = dict(ij)
            doubled[(i, m + j)] = {m + k: c for k, c in ji.items()}
            doubled[(m + i, j)] = {m + k: c * conj[j] for k, c in ij.items()}
            doubled[(m + i, m + j)] = {k: gamma * conj[j] * c for k, c in ji.items()}
    return doubled, conj + [-1] * m


class CayleyAlgebra:
    """O(alpha, beta, gamma) on the basis 1, e1, ..., e7

    e3 = e1 e2, e5 = e1 e4, e6 = e2 e4, e7 = e3 e4.
    """

    LABELS = ("1", "e1", "e2", "e3", "e4", "e5", "e6", "e7")

    def __init__(self, params: Tuple[Rational, Rational, Rational], structure: StructureConstants,
                 conj_signs: Sequence[int]):
        self.params = params
        self.structure = structure
        self.dim = structure.dim
        self.conj_signs = tuple(conj_signs)

    @property
    def name(self) -> str:
        return "O(" + ",".join(format_rational(p) for p in self.params) + ")"

    def basis(self, i: int) -> Vector:
        return unit_vector(self.dim, i)

    def basis_product(self, i: int, j: int) -> Terms:
        return self.structure.basis_product(i, j)

    def mul(self, u: Sequence[Rational], v: Sequence[Rational]) -> Vector:
        return self.structure.mul(u, v)

    def conjugate(self, u: Sequence[Rational]) -> Vector:
        return tuple(s * a for s, a in zip(self.conj_signs, u))

    def norm(self, u: Sequence[Rational]) -> Rational:
        """n(u) = u conj(u), a scalar"""
        return self.mul(u, self.conjugate(u))[0]

    def bilinear(self, u: Sequence[Rational], v: Sequence[Rational]) -> Rational:
        return (self.norm(_add(u, v)) - self.norm(u) - self.norm(v)) / 2

    def trace(self, u: Sequence[Rational]) -> Rational:
        """t(u) = u + conj(u), a scalar"""
        return _add(u, self.conjugate(u))[0]

    def norm_matrix(self) -> QMatrix:
        return QMatrix([[self.bilinear(self.basis(i), self.basis(j)) for j in range(self.dim)]
                        for i in range(self.dim)])

    def trace0(self) -> Subspace:
        """O0, the traceless elements"""
        functional = QMatrix([[self.trace(self.basis(j)) for j in range(self.dim)]])
        return kernel(functional)

    def traceless_basis(self) -> List[Vector]:
        return [self.basis(i) for i in range(1, self.dim)]

    def left(self, u: Sequence[Rational]) -> QMatrix:
        return self.structure.left_matrix(u)

    def right(self, u: Sequence[Rational]) -> QMatrix:
        return self.structure.right_matrix(u)

    def find_isotropic(self) -> Optional[Vector]:
        """A nonzero u with n(u) = 0 of the form e_i + c e_j, c = +-1, if there is one"""
        for i, j in itertools.combinations(range(self.dim), 2):
            for c in (ONE, -ONE):
                u = _add(self.basis(i), tuple(c * a for a in self.basis(j)))
                if self.norm(u) == 0:
                    return u
        return None


def check_alternative(sc: StructureConstants) -> CheckResult:
    """x(xy) = x^2 y and (yx)x = y x^2, linearized over basis triples"""
    n = sc.dim
    e = sc.basis
    for x, z, y in itertools.product(range(n), repeat=3):
        left = _add(sc.associator(e(x), e(z), e(y)), sc.associator(e(z), e(x), e(y)))
        if any(left):
            return check_failed({"law": "left alternative", "x": x + 1, "z": z + 1, "y": y + 1})
        right = _add(sc.associator(e(y), e(x), e(z)), sc.associator(e(y), e(z), e(x)))
        if any(right):
            return check_failed({"law": "right alternative", "x": x + 1, "z": z + 1, "y": y + 1})
    return check_passed({"triples": n ** 3})


def check_norm_multiplicative(o: CayleyAlgebra) -> CheckResult:
    """n(xy) = n(x) n(y) on basis pairs"""
    for i in range(o.dim):
        for j in range(o.dim):
            x, y = o.basis(i), o.basis(j)
            if o.norm(o.mul(x, y)) != o.norm(x) * o.norm(y):
                return check_failed({"x": o.LABELS[i], "y": o.LABELS[j]})
    return check_passed({"pairs": o.dim ** 2})


def build_cayley(alpha: Any, beta: Any, gamma: Any) -> CayleyAlgebra:
    """Three Cayley-Dickson doublings of Q with parameters alpha, beta, gamma"""
    params = tuple(q(p) for p in (alpha, beta, gamma))
    if any(p == 0 for p in params):
        raise UnsupportedInputError("Cayley parameters must be nonzero")
    table: Dict[Tuple[int, int], Terms] = {(0, 0): {0: ONE}}
    conj = [1]
    for p in params:
        table, conj = _double(table, conj, p)
    structure = StructureConstants(Limits.OCTONION_DIM, table, name="O")
    o = CayleyAlgebra(params, structure, conj)

    for label, verdict in (("alternative", check_alternative(structure)),
                           ("norm", check_norm_multiplicative(o))):
        if not verdict["passed"]:
            raise VerificationError(f"{o.name} fails the {label} check: {verdict['witness']}")
    logger.debug(f"Built {o.name}")
    return o


# o(O, n) and its triality

def derivations(sc: StructureConstants) -> List[QMatrix]:
    """Basis of Der(A) = {D : D(xy) = D(x)y + xD(y)} as matrices"""
    n = sc.dim
    rows: List[Dict[int, Rational]] = []
    for i in range(n):
        for j in range(n):
            eq: Dict[Tuple[int, int], Dict[int, Rational]] = {}

            def add(k: int, var: int, c: Rational) -> None:
                row = eq.setdefault(k, {})
                row[var] = row.get(var, ZERO) + c

            # D = E_rs sends e_s to e_r
            for s, c in sc.table.get((i, j), {}).items():
                for r in range(n):
                    add(r, r * n + s, c)
            for r in range(n):
                for k, c in sc.table.get((r, j), {}).items():
                    add(k, r * n + i, -c)
                for k, c in sc.table.get((i, r), {}).items():
                    add(k, r * n + j, -c)
            rows.extend(eq.values())
    space = null_space(rows, n * n)
    return [QMatrix.from_vec(v, n) for v in space.basis]


def skew_operators(o: CayleyAlgebra) -> Subspace:
    """{d : n(dx,y) + n(x,dy) = 0} inside the n x n matrices"""
    n = o.dim
    norm = o.norm_matrix()
    rows = []
    for i in range(n):
        for j in range(i, n):
            row: Dict[int, Rational] = {}
            for r in range(n):
                # n(d e_i, e_j) + n(e_i, d e_j)
                for var, c in ((r * n + i, norm.entries[r][j]), (r * n + j, norm.entries[i][r])):
                    if c:
                        row[var] = row.get(var, ZERO) + c
            rows.append(row)
    return null_space(rows, n * n)


def check_derivation(sc: StructureConstants, d: QMatrix) -> Optional[Dict[str, int]]:
    e = sc.basis
    for i in range(sc.dim):
        for j in range(sc.dim):
            lhs = d.apply(sc.mul(e(i), e(j)))
            rhs = _add(sc.mul(d.apply(e(i)), e(j)), sc.mul(e(i), d.apply(e(j))))
            if lhs != rhs:
                return {"x": i + 1, "y": j + 1}
    return None


class OrthoLie(NamedTuple):
    algebra: CayleyAlgebra
    der: List[QMatrix]
    left: List[QMatrix]
    right: List[QMatrix]
    coords: CoordinateSystem
    result: CheckResult

    @property
    def basis(self) -> List[QMatrix]:
        return self.der + self.left + self.right

    @property
    def dim(self) -> int:
        return len(self.der) + len(self.left) + len(self.right)

    def coordinates(self, d: QMatrix) -> Vector:
        c = self.coords.coordinates(d.vec())
        if c is None:
            raise DimensionMismatchError("operator lies outside o(O,n)")
        return c

    def matrix(self, coefficients: Sequence[Rational]) -> QMatrix:
        return QMatrix.from_vec(self.coords.combination(coefficients), self.algebra.dim)


def ortho_lie(o: CayleyAlgebra) -> OrthoLie:
    """o(O,n) = Der(O) + <L_a | a in O0> + <R_b | b in O0>, checked direct and equal to the skew space"""
    der = derivations(o.structure)
    traceless = o.traceless_basis()
    left = [o.left(a) for a in traceless]
    right = [o.right(a) for a in traceless]
    vectors = [m.vec() for m in der + left + right]

    parts: Dict[str, CheckResult] = {}
    try:
        coords = CoordinateSystem(vectors, o.dim * o.dim)
        parts["direct_sum"] = check_passed({"dim": len(vectors)})
    except DimensionMismatchError as e:
        raise VerificationError("Der(O), L_{O0} and R_{O0} are not independent") from e

    skew = skew_operators(o)
    parts["skew_space"] = (
        check_passed({"skew_dim": skew.dim}) if coords.subspace() == skew
        else check_failed({"skew_dim": skew.dim, "sum_dim": len(vectors)})
    )
    for idx, d in enumerate(der):
        witness = check_derivation(o.structure, d)
        if witness is not None:
            parts["derivations"] = check_failed({"derivation": idx + 1, **witness})
            break
    else:
        parts["derivations"] = check_passed({"derivations": len(der)})

    result = merge_results(parts)
    result["details"].update(der_dim=len(der), dim=len(vectors))
    logger.info(f"o({o.name}, n): dim Der = {len(der)}, total {len(vectors)}")
    return OrthoLie(o, der, left, right, coords, result)


def block_operator(n_der: int, n_m: int, on_left: Tuple[int, int], on_right: Tuple[int, int],
                   on_der: int = 1) -> QMatrix:
    """Linear map on Der + L + R: d -> on_der d, L_a -> cL L_a + cR R_a, R_a -> likewise"""
    dim = n_der + 2 * n_m
    columns = []
    for k in range(n_der):
        columns.append(tuple(q(on_der) if i == k else ZERO for i in range(dim)))
    for coeffs in (on_left, on_right):
        for a in range(n_m):
            col = list(zero_vector(dim))
            col[n_der + a] = q(coeffs[0])
            col[n_der + n_m + a] = q(coeffs[1])
            columns.append(tuple(col))
    return QMatrix.from_columns(columns, dim)


# rho: L -> R, R -> -T; sigma: L -> -R, R -> -L; zeta: L -> T, R -> -R; eta: L -> -L, R -> T
RHO_BLOCKS = ((0, 1), (-1, -1))
SIGMA_BLOCKS = ((0, -1), (-1, 0))
ZETA_BLOCKS = ((1, 1), (0, -1))
ETA_BLOCKS = ((-1, 0), (1, 1))


def lie_structure(ortho: OrthoLie) -> StructureConstants:
    """Bracket of o(O,n) in the Der + L + R coordinates"""
    basis = ortho.basis
    entries = []
    for i, j in itertools.combinations(range(len(basis)), 2):
        entries.append((i, j, dict(enumerate(ortho.coordinates(commutator(basis[i], basis[j]))))))
    return StructureConstants.from_bracket_entries(len(basis), entries, name="o(O,n)")


class LieWithTriality(NamedTuple):
    bracket: StructureConstants
    rho: QMatrix
    sigma: QMatrix
    name: str = "g"

    @property
    def dim(self) -> int:
        return self.bracket.dim


def check_bracket_automorphism(sc: StructureConstants, m: QMatrix) -> CheckResult:
    images = [m.column(i) for i in range(sc.dim)]
    for i, j in itertools.combinations(range(sc.dim), 2):
        lhs = m.apply(sc.mul(sc.basis(i), sc.basis(j)))
        rhs = sc.mul(images[i], images[j])
        if lhs != rhs:
            return check_failed({"x": i + 1, "y": j + 1})
    return check_passed({"pairs": sc.dim * (sc.dim - 1) // 2})


def check_s3_matrices(rho: QMatrix, sigma: QMatrix) -> CheckResult:
    ident = QMatrix.identity(rho.rows)
    if rho.power(3) != ident:
        return check_failed({"relation": "rho^3 = 1"})
    if sigma @ sigma != ident:
        return check_failed({"relation": "sigma^2 = 1"})
    if sigma @ rho != rho @ rho @ sigma:
        return check_failed({"relation": "sigma rho = rho^2 sigma"})
    return check_passed()


def validate_lie_triality(g: LieWithTriality) -> CheckResult:
    """Jacobi, both maps bracket automorphisms, and the S3 relations"""
    parts = {
        "anticommutative": check_passed() if g.bracket.is_anticommutative()
        else check_failed({"reason": "bracket is not anticommutative"}),
        "jacobi": check_jacobi(g.bracket),
        "rho_automorphism": check_bracket_automorphism(g.bracket, g.rho),
        "sigma_automorphism": check_bracket_automorphism(g.bracket, g.sigma),
        "s3_relations": check_s3_matrices(g.rho, g.sigma),
    }
    return merge_results(parts)


def _triality_operator(g: LieWithTriality) -> QMatrix:
    """1 - sigma + rho - rho sigma + rho^2 - rho^2 sigma"""
    ident = QMatrix.identity(g.dim)
    p, s = g.rho, g.sigma
    p2 = p @ p
    return ident - s + p - p @ s + p2 - p2 @ s


def _signed_s3_sum(g: LieWithTriality) -> QMatrix:
    """sum over tau in S3 of sign(tau) tau, reflections written sigma rho^k"""
    ident = QMatrix.identity(g.dim)
    rotations = ident + g.rho + g.rho @ g.rho
    return (ident - g.sigma) @ rotations


def check_lie_triality(g: LieWithTriality) -> CheckResult:
    """a - sigma(a) + rho(a) - rho sigma(a) + rho^2(a) - rho^2 sigma(a) = 0 on a basis,
    and the same six terms summed with sign over S3 in the order sigma rho^k"""
    op = _triality_operator(g)
    signed = _signed_s3_sum(g)
    parts = {"identity": check_passed({"basis": g.dim}), "signed_sum": check_passed()}
    for j in range(g.dim):
        col = op.column(j)
        if any(col):
            parts["identity"] = check_failed({"basis": j + 1, "value": _vector_text(col)})
            break
    for j in range(g.dim):
        if signed.column(j) != op.column(j):
            parts["signed_sum"] = check_failed({"basis": j + 1, "signed": _vector_text(signed.column(j)),
                                                "identity": _vector_text(op.column(j))})
            break
    return merge_results(parts)


def eigen_one_criterion(g: LieWithTriality) -> CheckResult:
    """E(1; rho) inside E(1; sigma), compared against the triality identity"""
    ident = QMatrix.identity(g.dim)
    fixed_rho = kernel(g.rho - ident)
    fixed_sigma = kernel(g.sigma - ident)
    holds = fixed_rho <= fixed_sigma
    identity_holds = check_lie_triality(g)["passed"]
    details = {"e1_rho_dim": fixed_rho.dim, "e1_sigma_dim": fixed_sigma.dim,
               "identity_holds": identity_holds, "agrees": holds == identity_holds}
    if holds:
        return check_passed(**details)
    outside = next(v for v in fixed_rho.basis if not fixed_sigma.contains(v))
    return check_failed({"vector": _vector_text(outside)}, **details)


def triality_autos_o(ortho: OrthoLie) -> Tuple[LieWithTriality, CheckResult]:
    """rho, sigma on o(O,n), checked against the companion maps zeta, eta"""
    n_der, n_m = len(ortho.der), len(ortho.left)
    rho = block_operator(n_der, n_m, *RHO_BLOCKS)
    sigma = block_operator(n_der, n_m, *SIGMA_BLOCKS)
    zeta = block_operator(n_der, n_m, *ZETA_BLOCKS)
    eta = block_operator(n_der, n_m, *ETA_BLOCKS)
    g = LieWithTriality(lie_structure(ortho), rho, sigma, "o(O,n)")

    parts = {
        "valid": validate_lie_triality(g),
        "companions": check_companion_maps(ortho, zeta, eta),
        "rho = eta zeta": check_passed() if eta @ zeta == rho else check_failed({"relation": "rho = eta zeta"}),
        "sigma = zeta eta zeta": (
            check_passed() if zeta @ eta @ zeta == sigma else check_failed({"relation": "sigma = zeta eta zeta"})
        ),
    }
    return g, merge_results(parts)


def check_companion_maps(ortho: OrthoLie, zeta: QMatrix, eta: QMatrix) -> CheckResult:
    """d1(xy) = zeta(d1)(x) y + x eta(d1)(y) for each basis d1 on all basis pairs"""
    o = ortho.algebra
    basis = ortho.basis
    for idx, d1 in enumerate(basis):
        d2 = ortho.matrix(zeta.column(idx))
        d3 = ortho.matrix(eta.column(idx))
        for i in range(o.dim):
            for j in range(o.dim):
                x, y = o.basis(i), o.basis(j)
                lhs = d1.apply(o.mul(x, y))
                rhs = _add(o.mul(d2.apply(x), y), o.mul(x, d3.apply(y)))
                if lhs != rhs:
                    return check_failed({"operator": idx + 1, "x": o.LABELS[i], "y": o.LABELS[j]})
    return check_passed({"operators": len(basis), "pairs": o.dim ** 2})


def wreath_lie(s: StructureConstants) -> LieWithTriality:
    """s + s + s with rho the cyclic shift of summands and sigma swapping the first two"""
    n = s.dim
    dim = 3 * n
    product = {}
    for block in range(3):
        for (i, j), terms in s.table.items():
            product[(block * n + i, block * n + j)] = {block * n + k: c for k, c in terms.items()}
    bracket = StructureConstants(dim, product, bracket=True, name=f"{s.name}^3")

    def block_perm(perm: Sequence[int]) -> QMatrix:
        return QMatrix.from_columns(
            [unit_vector(dim, perm[k // n] * n + k % n) for k in range(dim)], dim
        )

    return LieWithTriality(bracket, block_perm((1, 2, 0)), block_perm((1, 0, 2)), f"{s.name}wr")


def trivial_lie_triality(s: StructureConstants) -> LieWithTriality:
    ident = QMatrix.identity(s.dim)
    return LieWithTriality(s, ident, ident, f"{s.name}(trivial)")


def broken_sigma(g: LieWithTriality, index: int = 0) -> LieWithTriality:
    """Flip the sign of sigma on one basis vector; not an automorphism, a matrix pair only"""
    flip = QMatrix([[(-ONE if i == j == index else (ONE if i == j else ZERO)) for j in range(g.dim)]
                    for i in range(g.dim)])
    return LieWithTriality(g.bracket, g.rho, g.sigma @ flip, f"{g.name}(broken)")


# Lie(m) for m = O0

def malcev_bracket(o: CayleyAlgebra) -> StructureConstants:
    """[a, b] = ab - ba on O0 in the traceless basis"""
    basis = o.traceless_basis()
    coords = CoordinateSystem(basis, o.dim)
    entries = []
    for i, j in itertools.combinations(range(len(basis)), 2):
        a, b = basis[i], basis[j]
        ab = tuple(x - y for x, y in zip(o.mul(a, b), o.mul(b, a)))
        c = coords.coordinates(ab)
        if c is None:
            raise VerificationError("O0 is not closed under the commutator")
        entries.append((i, j, dict(enumerate(c))))
    return StructureConstants.from_bracket_entries(len(basis), entries, name="O0")


def _combine_ops(ops: Sequence[QMatrix], coords: Sequence[Rational]) -> QMatrix:
    out = QMatrix.zeros(ops[0].rows, ops[0].cols)
    for c, op in zip(coords, ops):
        if c:
            out = out + op.scale(c)
    return out


def check_pesh_operators(m: StructureConstants, lam: Sequence[QMatrix], rho: Sequence[QMatrix]) -> CheckResult:
    """[l_a, l_b] = l_[a,b] - 2[l_a, r_b], [r_a, r_b] = -r_[a,b] - 2[l_a, r_b], [l_a, r_b] = [r_a, l_b]
    on every pair of basis vectors of m"""
    if len(lam) != m.dim or len(rho) != m.dim:
        raise DimensionMismatchError(f"need {m.dim} operators of each kind, got {len(lam)} and {len(rho)}")
    families: Dict[str, Optional[Dict[str, int]]] = {
        "[lambda_a, lambda_b]": None,
        "[rho_a, rho_b]": None,
        "[lambda_a, rho_b] = [rho_a, lambda_b]": None,
    }
    for ia, ib in itertools.product(range(m.dim), repeat=2):
        ab = m.mul(m.basis(ia), m.basis(ib))
        lr = commutator(lam[ia], rho[ib])
        checks = {
            "[lambda_a, lambda_b]": commutator(lam[ia], lam[ib]) == _combine_ops(lam, ab) - lr.scale(2),
            "[rho_a, rho_b]": commutator(rho[ia], rho[ib]) == -_combine_ops(rho, ab) - lr.scale(2),
            "[lambda_a, rho_b] = [rho_a, lambda_b]": lr == commutator(rho[ia], lam[ib]),
        }
        for family, ok in checks.items():
            if not ok and families[family] is None:
                families[family] = {"a": ia + 1, "b": ib + 1}
    parts = {
        family: check_failed(witness) if witness else check_passed({"pairs": m.dim ** 2})
        for family, witness in families.items()
    }
    return merge_results(parts)


def check_pesh_relations(o: CayleyAlgebra) -> CheckResult:
    """The defining relations of Lie(O0) for lambda_a = L_a and rho_a = R_a"""
    basis = o.traceless_basis()
    return check_pesh_operators(malcev_bracket(o), [o.left(a) for a in basis], [o.right(a) for a in basis])


class LieOfMalcev(NamedTuple):
    triality: LieWithTriality
    ortho: OrthoLie
    lam: List[QMatrix]
    rho_ops: List[QMatrix]
    t_ops: List[QMatrix]
    ad_ops: List[QMatrix]
    plus: Subspace
    minus: Subspace
    result: CheckResult


def lie_of_malcev(o: CayleyAlgebra) -> LieOfMalcev:
    """Lie(O0) realized by the operators L_a, R_a on O, with its triality rho = eta zeta, sigma = zeta eta zeta"""
    ortho = ortho_lie(o)
    basis = o.traceless_basis()
    m_dim = len(basis)
    lam = [o.left(a) for a in basis]
    rho_ops = [o.right(a) for a in basis]
    t_ops = [x + y for x, y in zip(lam, rho_ops)]
    ad_ops = [x - y for x, y in zip(lam, rho_ops)]
    n2 = o.dim * o.dim

    parts: Dict[str, CheckResult] = {"relations": check_pesh_relations(o)}

    closure = bracket_closure(lam + rho_ops, commutator)
    parts["closure = o(O,n)"] = (
        check_passed({"dim": closure.dim}) if closure == ortho.coords.subspace()
        else check_failed({"closure_dim": closure.dim, "ortho_dim": ortho.dim})
    )

    minus = Subspace.from_vectors([t.vec() for t in t_ops], n2)
    derivs = []
    for ia, ib in itertools.product(range(m_dim), repeat=2):
        a, b = basis[ia], basis[ib]
        ab = _sub(o.mul(a, b), o.mul(b, a))
        ad_ab = o.left(ab) - o.right(ab)
        derivs.append((ad_ab - commutator(lam[ia], rho_ops[ib]).scale(3)).vec())
    plus = Subspace.from_vectors([x.vec() for x in ad_ops] + derivs, n2)
    parts["T_a -> a"] = (
        check_passed({"minus_dim": minus.dim}) if minus.dim == m_dim
        else check_failed({"minus_dim": minus.dim, "m_dim": m_dim})
    )
    total = plus.join(minus.basis)
    parts["Lie+ + Lie-"] = (
        check_passed({"plus_dim": plus.dim}) if total.dim == plus.dim + minus.dim and total == closure
        else check_failed({"plus_dim": plus.dim, "minus_dim": minus.dim, "sum_dim": total.dim})
    )

    g, autos = triality_autos_o(ortho)
    parts["triality_autos"] = autos
    n_der = len(ortho.der)
    zeta = block_operator(n_der, m_dim, *ZETA_BLOCKS)
    eta = block_operator(n_der, m_dim, *ETA_BLOCKS)
    parts["zeta_automorphism"] = check_bracket_automorphism(g.bracket, zeta)
    parts["eta_automorphism"] = check_bracket_automorphism(g.bracket, eta)

    for ia in range(m_dim):
        coords = ortho.coordinates(lam[ia])
        if ortho.matrix(g.sigma.apply(coords)) != -rho_ops[ia]:
            parts["sigma(lambda_a) = -rho_a"] = check_failed({"a": o.LABELS[ia + 1]})
            break
        if ortho.matrix(g.rho.apply(coords)) != rho_ops[ia]:
            parts["rho(lambda_a) = rho_a"] = check_failed({"a": o.LABELS[ia + 1]})
            break
    else:
        parts["generator_images"] = check_passed({"generators": m_dim})

    parts["triality"] = check_lie_triality(g)
    result = merge_results(parts)
    result["details"].update(dim=closure.dim, plus_dim=plus.dim, minus_dim=minus.dim)
    if not result["passed"]:
        logger.warning(f"Lie(O0) verification failed: {result['witness']}")
    return LieOfMalcev(g, ortho, lam, rho_ops, t_ops, ad_ops, plus, minus, result)
