import pytest
from sympy import QQ

from triality.services.qcore_service import (
    ONE,
    ZERO,
    CoordinateSystem,
    QMatrix,
    Subspace,
    bracket_closure,
    commutator,
    image,
    in_span,
    kernel,
    null_space,
    q,
    rank,
    solve,
    sparse_rank,
    spans_equal,
    unit_vector,
    zero_vector,
)
from triality.utils.errors import DimensionMismatchError


def test_matrix_arithmetic():
    a = QMatrix([[1, 2], [3, 4]])
    b = QMatrix([[0, 1], [1, 0]])
    assert (a @ b).entries == ((q(2), q(1)), (q(4), q(3)))
    assert a + b - b == a
    assert (a - a).is_zero()
    assert a.scale(QQ(1, 2)).entries[0][0] == QQ(1, 2)
    assert b.power(2) == QMatrix.identity(2)
    assert a.apply((ONE, ZERO)) == (q(1), q(3))
    assert a.transpose().column(0) == (q(1), q(2))


def test_vec_round_trip_and_columns():
    a = QMatrix([[1, 2, 3], [4, 5, 6], [7, 8, 9]])
    assert QMatrix.from_vec(a.vec(), 3) == a
    assert QMatrix.from_columns([a.column(j) for j in range(3)], 3) == a


def test_ragged_rows_rejected():
    with pytest.raises(DimensionMismatchError):
        QMatrix([[1, 2], [3]])


def test_commutator_of_matrix_units():
    e = QMatrix([[0, 1], [0, 0]])
    f = QMatrix([[0, 0], [1, 0]])
    assert commutator(e, f) == QMatrix([[1, 0], [0, -1]])


def test_kernel_image_rank():
    m = QMatrix([[1, 2, 3], [2, 4, 6]])
    assert rank(m) == 1
    assert kernel(m).dim == 2
    assert image(m).dim == 1
    for v in kernel(m).basis:
        assert m.apply(v) == zero_vector(2)


def test_null_space_of_sparse_rows():
    space = null_space([{0: ONE, 1: -ONE}], 3)
    assert space.dim == 2
    assert space.contains((ONE, ONE, ZERO))
    assert not space.contains((ONE, ZERO, ZERO))


def test_subspace_is_canonical():
    a = Subspace.from_vectors([(1, 1, 0), (0, 1, 1)], 3)
    b = Subspace.from_vectors([(1, 2, 1), (1, 0, -1), (2, 2, 0)], 3)
    assert a == b
    assert hash(a) == hash(b)
    assert a <= Subspace.full(3)
    assert Subspace.zero(3) <= a
    assert a.join([unit_vector(3, 0)]).dim == 3


def test_subspace_rejects_wrong_length():
    with pytest.raises(DimensionMismatchError):
        Subspace.from_vectors([(1, 2)], 3)


def test_solve():
    m = QMatrix([[2, 0], [0, 3]])
    assert solve(m, [1, 1]) == (QQ(1, 2), QQ(1, 3))
    assert solve(QMatrix([[1, 1], [1, 1]]), [1, 2]) is None


def test_sparse_rank_and_spans():
    u = {"a": 1, "b": 1}
    v = {"a": 1, "b": -1}
    w = {"a": 1}
    assert sparse_rank([u, v, w]) == 2
    assert sparse_rank([]) == 0
    assert spans_equal([u, v], [w, {"b": 2}])
    assert in_span(w, [u, v])
    assert not in_span({"c": 1}, [u, v])


def test_bracket_closure_of_sl2_generators():
    e = QMatrix([[0, 1], [0, 0]])
    f = QMatrix([[0, 0], [1, 0]])
    assert bracket_closure([e, f], commutator).dim == 3


def test_bracket_closure_includes_squares():
    d = QMatrix([[1, 0], [0, 2]])
    closed = bracket_closure([d], lambda a, b: a @ b)
    # diag(1, 4) = d d is outside span{d}
    assert closed.dim == 2
    assert closed.contains(QMatrix([[1, 0], [0, 4]]).vec())


def test_coordinate_system():
    coords = CoordinateSystem([(1, 1, 0), (0, 1, 1)], 3)
    assert coords.coordinates((q(2), q(5), q(3))) == (q(2), q(3))
    assert coords.coordinates((ONE, ZERO, ZERO)) is None
    assert coords.combination((q(2), q(3))) == (q(2), q(5), q(3))
    assert coords.subspace().dim == 2


def test_coordinate_system_rejects_dependent_vectors():
    with pytest.raises(DimensionMismatchError):
        CoordinateSystem([(1, 1), (2, 2)], 2)
