"""
Loop Service - finite loops, Moufang identities and multiplication operators

This service handles Cayley-table loops: validation, the three Moufang
identities, the multiplication operators L, R, P, U, J, the Doro relation
block on those operators, multiplication groups, and the generators for the
loop corpus (Chein doubling, the signed octonion units, a non-Moufang loop
found by Latin-square search, small groups).

Operators act on the right: compose(f, g) applies f first, then g.
Indices are 0-based internally with the unit at index 0.
"""

from __future__ import annotations

import itertools
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from triality.config import config
from triality.utils.errors import (
    CapExceededError,
    FormatError,
    NoUnitError,
    NotAGroupError,
    NotLatinSquareError,
    TrialityError,
)
from triality.utils.constants import Messages
from triality.utils.helpers import CheckResult, check_failed, check_passed, merge_results, setup_logger

# Setup logging
logger = setup_logger(__name__)

Perm = Tuple[int, ...]


def identity_perm(n: int) -> Perm:
    return tuple(range(n))


def compose(f: Perm, g: Perm) -> Perm:
    """Right-action product: x(fg) = (xf)g"""
    return tuple(g[y] for y in f)


def compose_all(*perms: Perm) -> Perm:
    out = perms[0]
    for p in perms[1:]:
        out = compose(out, p)
    return out


def invert(f: Perm) -> Perm:
    out = [0] * len(f)
    for x, y in enumerate(f):
        out[y] = x
    return tuple(out)


def is_permutation(f: Sequence[int], n: int) -> bool:
    return len(f) == n and sorted(f) == list(range(n))


class FiniteLoop:
    """Cayley-table loop with unit 0; immutable once validated"""

    def __init__(self, table: np.ndarray, name: str = "loop"):
        self.table = np.ascontiguousarray(table, dtype=np.intp)
        self.table.setflags(write=False)
        self.order = int(self.table.shape[0])
        self.name = name
        self.unit = 0
        self._rows = tuple(tuple(int(v) for v in row) for row in self.table)

        n = self.order
        ldiv = np.empty((n, n), dtype=np.intp)
        rdiv = np.empty((n, n), dtype=np.intp)
        idx = np.arange(n)
        for a in range(n):
            ldiv[a, self.table[a, :]] = idx
            rdiv[self.table[:, a], a] = idx
        self._ldiv = tuple(tuple(int(v) for v in row) for row in ldiv)
        self._rdiv = tuple(tuple(int(v) for v in row) for row in rdiv)

    def mul(self, a: int, b: int) -> int:
        return self._rows[a][b]

    def ldiv(self, a: int, z: int) -> int:
        """x with a*x = z"""
        return self._ldiv[a][z]

    def rdiv(self, z: int, a: int) -> int:
        """x with x*a = z"""
        return self._rdiv[z][a]

    def inverse(self, x: int) -> int:
        right = self._ldiv[x][0]
        left = self._rdiv[0][x]
        if left != right:
            raise TrialityError(f"element {x + 1} has no two-sided inverse")
        return right

    def power(self, x: int, k: int) -> int:
        """Left-normed power x^k, negative k via the inverse"""
        base = self.inverse(x) if k < 0 else x
        out = 0
        for _ in range(abs(k)):
            out = self._rows[out][base]
        return out

    def left(self, a: int) -> Perm:
        return tuple(self._rows[a][x] for x in range(self.order))

    def right(self, a: int) -> Perm:
        return tuple(self._rows[x][a] for x in range(self.order))

    def rows(self) -> Tuple[Tuple[int, ...], ...]:
        return self._rows

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteLoop) and self._rows == other._rows

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        return f"FiniteLoop({self.name}, order={self.order})"


def check_loop(table: Sequence[Sequence[int]], name: str = "loop") -> FiniteLoop:
    """Validate a 0-based Cayley table and return the loop"""
    if len(table) == 0:
        raise FormatError(Messages.EMPTY_TABLE)
    n = len(table)
    for i, row in enumerate(table):
        if len(row) != n:
            raise FormatError(f"row {i + 1} has {len(row)} entries, expected {n}")
        for v in row:
            if not 0 <= v < n:
                raise FormatError(f"row {i + 1} has entry {v + 1} outside 1..{n}")
    arr = np.array(table, dtype=np.intp)
    for i in range(n):
        row = arr[i, :]
        if len(set(row.tolist())) != n:
            dup = _first_duplicate(row.tolist())
            raise NotLatinSquareError("row", i, dup)
        col = arr[:, i]
        if len(set(col.tolist())) != n:
            dup = _first_duplicate(col.tolist())
            raise NotLatinSquareError("column", i, dup)

    ident = np.arange(n)
    units = [
        e for e in range(n)
        if np.array_equal(arr[e, :], ident) and np.array_equal(arr[:, e], ident)
    ]
    if not units:
        raise NoUnitError(Messages.NO_UNIT)
    if units[0] != 0:
        raise NoUnitError(f"{Messages.UNIT_NOT_FIRST}, found unit at index {units[0] + 1}")
    return FiniteLoop(arr, name)


def _first_duplicate(values: List[int]) -> int:
    seen = set()
    for v in values:
        if v in seen:
            return v
        seen.add(v)
    return -1


def parse_loop_text(text: str, name: str = "loop") -> FiniteLoop:
    """Parse the 1-based text format: first line n, then n rows"""
    lines = [(i + 1, line.strip()) for i, line in enumerate(text.splitlines())]
    lines = [(no, line) for no, line in lines if line and not line.startswith('#')]
    if not lines:
        raise FormatError("empty loop file", line=1)
    first_no, first = lines[0]
    try:
        n = int(first)
    except ValueError as e:
        raise FormatError(f"expected the order, got {first!r}", line=first_no) from e
    if n <= 0:
        raise FormatError("order must be positive", line=first_no)
    body = lines[1:]
    if len(body) != n:
        last = body[-1][0] if body else first_no
        raise FormatError(f"expected {n} table rows, found {len(body)}", line=last)
    table = []
    for no, line in body:
        try:
            row = [int(tok) - 1 for tok in line.split()]
        except ValueError as e:
            raise FormatError(f"non-integer entry in {line!r}", line=no) from e
        if len(row) != n:
            raise FormatError(f"expected {n} entries, found {len(row)}", line=no)
        table.append(row)
    return check_loop(table, name)


def loop_to_text(q: FiniteLoop) -> str:
    width = len(str(q.order))
    lines = [str(q.order)]
    for row in q.rows():
        lines.append(" ".join(str(v + 1).rjust(width) for v in row))
    return "\n".join(lines) + "\n"


def _first_mismatch(lhs: np.ndarray, rhs: np.ndarray) -> Optional[Tuple[int, ...]]:
    bad = np.argwhere(lhs != rhs)
    if bad.size == 0:
        return None
    return tuple(int(v) for v in bad[0])


def _grid(n: int):
    idx = np.arange(n)
    return idx[:, None, None], idx[None, :, None], idx[None, None, :]


def check_moufang(q: FiniteLoop) -> CheckResult:
    """The left, middle and right Moufang identities, each scanned independently"""
    T = q.table
    A, X, Y = _grid(q.order)
    identities = {
        "left": (T[A, T[X, T[A, Y]]], T[T[T[A, X], A], Y], "a(x(ay)) = ((ax)a)y"),
        "middle": (T[T[A, T[X, Y]], A], T[T[A, X], T[Y, A]], "(a(xy))a = (ax)(ya)"),
        "right": (T[T[T[X, A], Y], A], T[X, T[A, T[Y, A]]], "((xa)y)a = x(a(ya))"),
    }
    parts = {}
    for label, (lhs, rhs, text) in identities.items():
        witness = _first_mismatch(lhs, rhs)
        scanned = {"triples": q.order ** 3}
        if witness is None:
            parts[label] = check_passed(scanned)
        else:
            a, x, y = witness
            parts[label] = check_failed(
                {"identity": text, "a": a + 1, "x": x + 1, "y": y + 1,
                 "lhs": int(lhs[witness]) + 1, "rhs": int(rhs[witness]) + 1},
                scanned,
            )
    result = merge_results(parts)
    logger.info(f"Moufang scan on {q.name}: {result['details']['parts']}")
    return result


def is_moufang(q: FiniteLoop) -> bool:
    return check_moufang(q)["passed"]


def associativity_witness(q: FiniteLoop) -> Optional[Tuple[int, int, int]]:
    """Least (x,y,z) with (xy)z != x(yz), 0-based"""
    T = q.table
    X, Y, Z = _grid(q.order)
    return _first_mismatch(T[T[X, Y], Z], T[X, T[Y, Z]])


def is_associative(q: FiniteLoop) -> bool:
    return associativity_witness(q) is None


def require_group(q: FiniteLoop) -> None:
    witness = associativity_witness(q)
    if witness is not None:
        x, y, z = (v + 1 for v in witness)
        raise NotAGroupError(f"{q.name} is not associative: ({x}{y}){z} != {x}({y}{z})")


class MultOps(NamedTuple):
    L: Perm
    R: Perm
    P: Perm
    U: Perm
    J: Perm


def inversion_map(q: FiniteLoop) -> Perm:
    return tuple(q.inverse(x) for x in range(q.order))


def mult_ops(q: FiniteLoop, x: int) -> MultOps:
    """L_x, R_x, P_x = R_x^-1 L_x^-1, U_x = L_x R_x and the inversion J"""
    L = q.left(x)
    R = q.right(x)
    P = compose(invert(R), invert(L))
    U = compose(L, R)
    return MultOps(L, R, P, U, inversion_map(q))


def check_inverse_property(q: FiniteLoop) -> CheckResult:
    """L_{x^-1} = L_x^-1, R_{x^-1} = R_x^-1 and J L_x J = R_x^-1"""
    J = inversion_map(q)
    for x in range(q.order):
        xi = J[x]
        L, R = q.left(x), q.right(x)
        if q.left(xi) != invert(L):
            return check_failed({"relation": "L_{x^-1} = L_x^-1", "x": x + 1})
        if q.right(xi) != invert(R):
            return check_failed({"relation": "R_{x^-1} = R_x^-1", "x": x + 1})
        if compose_all(J, L, J) != invert(R):
            return check_failed({"relation": "J L_x J = R_x^-1", "x": x + 1})
    return check_passed({"elements": q.order})


class DoroRelation(NamedTuple):
    name: str
    lhs: Tuple[str, str]
    rhs: Tuple[Tuple[str, str], ...]


# Operator symbols P, L, R applied to loop words; rhs factors are composed left to right.
DORO_RELATIONS: Tuple[DoroRelation, ...] = (
    DoroRelation("P_1 = 1", ("P", "1"), ()),
    DoroRelation("L_1 = 1", ("L", "1"), ()),
    DoroRelation("R_1 = 1", ("R", "1"), ()),
    DoroRelation("P_x L_x R_x = 1", ("1", "1"), (("P", "x"), ("L", "x"), ("R", "x"))),
    DoroRelation("L_{xyx} = L_x L_y L_x", ("L", "xyx"), (("L", "x"), ("L", "y"), ("L", "x"))),
    DoroRelation("R_{xyx} = R_x R_y R_x", ("R", "xyx"), (("R", "x"), ("R", "y"), ("R", "x"))),
    DoroRelation("P_{xyx} = P_x P_y P_x", ("P", "xyx"), (("P", "x"), ("P", "y"), ("P", "x"))),
    DoroRelation("L_{y^-1x} = R_y L_x P_y", ("L", "y^-1x"), (("R", "y"), ("L", "x"), ("P", "y"))),
    DoroRelation("R_{y^-1x} = P_y R_x L_y", ("R", "y^-1x"), (("P", "y"), ("R", "x"), ("L", "y"))),
    DoroRelation("P_{y^-1x} = L_y P_x R_y", ("P", "y^-1x"), (("L", "y"), ("P", "x"), ("R", "y"))),
    DoroRelation("L_{xy^-1} = P_y L_x R_y", ("L", "xy^-1"), (("P", "y"), ("L", "x"), ("R", "y"))),
    DoroRelation("R_{xy^-1} = L_y R_x P_y", ("R", "xy^-1"), (("L", "y"), ("R", "x"), ("P", "y"))),
    DoroRelation("P_{xy^-1} = R_y P_x L_y", ("P", "xy^-1"), (("R", "y"), ("P", "x"), ("L", "y"))),
)

# The unit relations count as one family
DORO_FAMILIES = 12

RHO_SUBSTITUTION = {"P": "L", "L": "R", "R": "P", "1": "1"}


def _word(q: FiniteLoop, word: str, x: int, y: int) -> int:
    if word == "1":
        return 0
    if word == "x":
        return x
    if word == "y":
        return y
    if word == "xyx":
        return q.mul(q.mul(x, y), x)
    if word == "y^-1x":
        return q.mul(q.inverse(y), x)
    if word == "xy^-1":
        return q.mul(x, q.inverse(y))
    raise ValueError(f"unknown word {word}")


class _OperatorTable:
    def __init__(self, q: FiniteLoop):
        self.identity = identity_perm(q.order)
        self.ops = {"L": [], "R": [], "P": []}
        for x in range(q.order):
            m = mult_ops(q, x)
            self.ops["L"].append(m.L)
            self.ops["R"].append(m.R)
            self.ops["P"].append(m.P)

    def get(self, symbol: str, element: int) -> Perm:
        if symbol == "1":
            return self.identity
        return self.ops[symbol][element]


def _evaluate_relation(q: FiniteLoop, ops: _OperatorTable, rel: DoroRelation) -> Optional[Dict[str, int]]:
    xs = range(q.order)
    needs_y = any("y" in w for _, w in (rel.lhs,) + rel.rhs)
    for x in xs:
        for y in (xs if needs_y else (0,)):
            lhs = ops.get(rel.lhs[0], _word(q, rel.lhs[1], x, y))
            rhs = ops.identity
            for symbol, word in rel.rhs:
                rhs = compose(rhs, ops.get(symbol, _word(q, word, x, y)))
            if lhs != rhs:
                return {"x": x + 1, "y": y + 1}
    return None


def verify_doro_relations(q: FiniteLoop) -> CheckResult:
    """Every relation of the Doro block on the multiplication operators, for all x, y"""
    ops = _OperatorTable(q)
    pairs = q.order * q.order
    for rel in DORO_RELATIONS:
        witness = _evaluate_relation(q, ops, rel)
        if witness is not None:
            logger.warning(f"Doro relation {rel.name} fails on {q.name} at {witness}")
            return check_failed({"relation": rel.name, **witness}, {"pairs": pairs})
    logger.info(f"All {DORO_FAMILIES} Doro relation families hold on {q.name}")
    return check_passed({"pairs": pairs, "families": DORO_FAMILIES})


def _substitute(rel: DoroRelation) -> Tuple[Tuple[str, str], Tuple[Tuple[str, str], ...]]:
    lhs = (RHO_SUBSTITUTION[rel.lhs[0]], rel.lhs[1])
    rhs = tuple((RHO_SUBSTITUTION[s], w) for s, w in rel.rhs)
    return lhs, rhs


def verify_doro_symmetry(q: FiniteLoop) -> CheckResult:
    """Substituting P -> L -> R -> P (x, y fixed) in any relation gives a relation that also holds"""
    known = {(rel.lhs, rel.rhs) for rel in DORO_RELATIONS}
    ops = _OperatorTable(q)
    outside = 0
    for rel in DORO_RELATIONS:
        lhs, rhs = _substitute(rel)
        if (lhs, rhs) not in known:
            outside += 1
        image = DoroRelation(f"rho({rel.name})", lhs, rhs)
        witness = _evaluate_relation(q, ops, image)
        if witness is not None:
            return check_failed({"relation": image.name, **witness})
    return check_passed({"relations": len(DORO_RELATIONS)}, rotated_forms=outside)


class PermutationGroup(NamedTuple):
    elements: Tuple[Perm, ...]
    generators: Dict[str, Perm]

    @property
    def order(self) -> int:
        return len(self.elements)


def closure(generators: Sequence[Perm], n: int, cap: int) -> List[Perm]:
    """All products of the generators, by breadth-first search"""
    start = identity_perm(n)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for e in frontier:
            for g in generators:
                h = compose(e, g)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
                    if len(seen) > cap:
                        raise CapExceededError(f"permutation group exceeds {cap} elements")
        frontier = nxt
    return sorted(seen)


def multiplication_group(q: FiniteLoop, cap: Optional[int] = None) -> PermutationGroup:
    """Mult(Q): closure of all L_a, R_a under composition"""
    if q.order > config.MAX_LOOP_ORDER:
        raise CapExceededError(f"loop order {q.order} exceeds cap {config.MAX_LOOP_ORDER}")
    cap = cap if cap is not None else config.MULT_GROUP_CAP
    generators: Dict[str, Perm] = {}
    for a in range(q.order):
        generators[f"L{a + 1}"] = q.left(a)
        generators[f"R{a + 1}"] = q.right(a)
    distinct = sorted(set(generators.values()))
    elements = closure(distinct, q.order, cap)
    logger.info(f"Mult({q.name}) has order {len(elements)}")
    return PermutationGroup(tuple(elements), generators)


def subloop_closure(q: FiniteLoop, generators: Sequence[int]) -> List[int]:
    members = {0, *generators}
    frontier = list(members)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(members):
                for c in (q.mul(a, b), q.mul(b, a)):
                    if c not in members:
                        members.add(c)
                        nxt.append(c)
        frontier = nxt
    return sorted(members)


def generating_sequence(q: FiniteLoop) -> List[int]:
    """Greedy generating sequence: each step adds the element growing the subloop most"""
    gens: List[int] = []
    current = subloop_closure(q, gens)
    while len(current) < q.order:
        best, best_size = None, -1
        for x in range(q.order):
            if x in current:
                continue
            size = len(subloop_closure(q, gens + [x]))
            if size > best_size:
                best, best_size = x, size
        gens.append(best)
        current = subloop_closure(q, gens)
    return gens


# Corpus generators

def cyclic_group(n: int) -> FiniteLoop:
    return check_loop([[(i + j) % n for j in range(n)] for i in range(n)], f"C{n}")


def symmetric_group_s3() -> Tuple[FiniteLoop, List[Perm]]:
    """S3 on permutations of {0,1,2} in lexicographic order; product applies left factor first"""
    perms = list(itertools.permutations(range(3)))
    index = {p: i for i, p in enumerate(perms)}
    table = [[index[compose(a, b)] for b in perms] for a in perms]
    return check_loop(table, "S3"), perms


def direct_product(g: FiniteLoop, h: FiniteLoop, name: Optional[str] = None) -> FiniteLoop:
    """Pairs (a, b) indexed a*|h| + b"""
    m = h.order
    n = g.order * m
    table = [
        [g.mul(i // m, j // m) * m + h.mul(i % m, j % m) for j in range(n)]
        for i in range(n)
    ]
    return check_loop(table, name or f"{g.name}x{h.name}")


def chein_loop(g: FiniteLoop) -> FiniteLoop:
    """M(G,2) on G u Gu: g.h = gh, g.(hu) = (hg)u, (gu).h = (gh^-1)u, (gu).(hu) = h^-1 g"""
    require_group(g)
    n = g.order
    table = [[0] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        for b in range(n):
            binv = g.inverse(b)
            table[a][b] = g.mul(a, b)
            table[a][n + b] = n + g.mul(b, a)
            table[n + a][b] = n + g.mul(a, binv)
            table[n + a][n + b] = g.mul(binv, a)
    return check_loop(table, f"M({g.name},2)")


def octonion_unit_loop() -> FiniteLoop:
    """The 16 signed units of the octonions O(-1,-1,-1), ordered 1, -1, e1, -e1, ..."""
    from triality.services.malcev_service import build_cayley

    o = build_cayley(-1, -1, -1)
    elements = [(basis, sign) for basis in range(8) for sign in (1, -1)]
    index = {e: i for i, e in enumerate(elements)}

    def signed_product(a, b):
        (i, s), (j, t) = a, b
        terms = o.basis_product(i, j)
        if len(terms) != 1:
            raise TrialityError("signed units do not close under multiplication")
        (k, c), = terms.items()
        if c not in (1, -1):
            raise TrialityError("octonion basis product with coefficient other than +-1")
        return k, s * t * (1 if c == 1 else -1)

    reached = {(0, 1)}
    frontier = [(i, 1) for i in range(1, 8)]
    reached.update(frontier)
    while frontier:
        nxt = []
        for a in frontier:
            for b in list(reached):
                for c in (signed_product(a, b), signed_product(b, a)):
                    if c not in reached:
                        reached.add(c)
                        nxt.append(c)
        frontier = nxt
    if len(reached) != 16:
        raise TrialityError(f"signed unit closure has {len(reached)} elements, expected 16")

    table = [[index[signed_product(a, b)] for b in elements] for a in elements]
    return check_loop(table, "O16")


def _latin_squares(n: int, rng: np.random.Generator) -> Iterator[List[List[int]]]:
    """Normalized Latin squares (first row and column the identity), seeded value order"""
    grid = [[-1] * n for _ in range(n)]
    for i in range(n):
        grid[0][i] = i
        grid[i][0] = i
    cells = [(i, j) for i in range(1, n) for j in range(1, n)]
    values = [int(v) for v in rng.permutation(n)]

    def fill(k: int) -> Iterator[List[List[int]]]:
        if k == len(cells):
            yield [row[:] for row in grid]
            return
        i, j = cells[k]
        used = set(grid[i][:j]) | {grid[r][j] for r in range(i)}
        for v in values:
            if v not in used:
                grid[i][j] = v
                yield from fill(k + 1)
        grid[i][j] = -1

    yield from fill(0)


def nonmoufang_loop(order: int = 5, seed: int = 0) -> FiniteLoop:
    """First normalized Latin square (in seeded search order) violating left Moufang"""
    rng = np.random.default_rng(seed)
    for table in _latin_squares(order, rng):
        q = FiniteLoop(np.array(table), f"nonmoufang{order}")
        T = q.table
        A, X, Y = _grid(order)
        if _first_mismatch(T[A, T[X, T[A, Y]]], T[T[T[A, X], A], Y]) is not None:
            return check_loop(table, f"nonmoufang{order}")
    raise TrialityError(f"no non-Moufang loop of order {order}")
