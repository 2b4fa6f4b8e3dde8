import pytest

from triality.services.malcev_service import (
    LieWithTriality,
    StructureConstants,
    broken_sigma,
    build_cayley,
    check_alternative,
    check_jacobi,
    check_lie_triality,
    check_malcev,
    check_pesh_operators,
    check_pesh_relations,
    commutator_algebra,
    eigen_one_criterion,
    is_lie,
    lie_of_malcev,
    malcev_bracket,
    nalt,
    nonabelian_2d,
    nonflexible_algebra,
    perturb,
    restrict_to_subspace,
    sl2,
    trivial_lie_triality,
    triality_autos_o,
    validate_lie_triality,
    wreath_lie,
)
from triality.services.qcore_service import ONE, QMatrix, Subspace, q
from triality.utils.constants import Limits
from triality.utils.errors import DimensionMismatchError, FormatError, UnsupportedInputError


def test_sl2_is_lie_and_malcev():
    sc = sl2()
    assert sc.is_anticommutative()
    assert check_jacobi(sc)["passed"]
    assert check_malcev(sc)["passed"]


def test_perturbed_bracket_breaks_jacobi():
    # [e, f] = h + e
    sc = perturb(sl2(), 1, 2, 1, 1)
    assert sc.is_anticommutative()
    result = check_jacobi(sc)
    assert not result["passed"]
    assert result["witness"]


def test_bracket_entries_must_be_in_range():
    with pytest.raises(DimensionMismatchError):
        StructureConstants.from_bracket_entries(2, [(0, 1, {5: 1})])


def test_octonions_are_alternative(octonions):
    assert octonions.dim == Limits.OCTONION_DIM
    assert check_alternative(octonions.structure)["passed"]
    assert nalt(octonions.structure).dim == 8


def test_split_octonions():
    o = build_cayley(1, 1, 1)
    assert check_alternative(o.structure)["passed"]
    assert o.find_isotropic() is not None


def test_octonion_norm(octonions):
    e1 = octonions.basis(1)
    assert octonions.norm(e1) == ONE
    assert octonions.mul(e1, e1) == tuple(-ONE if i == 0 else q(0) for i in range(8))


def test_cayley_parameters_must_be_nonzero():
    with pytest.raises(UnsupportedInputError):
        build_cayley(0, -1, -1)


def test_nonflexible_algebra_is_not_alternative():
    assert not check_alternative(nonflexible_algebra())["passed"]


def test_ortho_lie_dimensions(ortho):
    assert ortho.result["passed"], ortho.result["witness"]
    assert len(ortho.der) == Limits.DER_DIM
    assert ortho.dim == Limits.ORTHO_DIM


def test_ortho_lie_carries_triality(ortho):
    g, result = triality_autos_o(ortho)
    assert result["passed"], result["witness"]
    assert g.dim == 28
    assert check_lie_triality(g)["passed"]
    assert eigen_one_criterion(g)["details"]["agrees"]


def test_wreath_lie_triality():
    for base in (nonabelian_2d(), sl2()):
        g = wreath_lie(base)
        assert validate_lie_triality(g)["passed"]
        result = check_lie_triality(g)
        assert result["passed"]
        assert result["details"]["parts"]["signed_sum"] == "pass"
        criterion = eigen_one_criterion(g)
        assert criterion["passed"] and criterion["details"]["agrees"]


def test_trivial_action_satisfies_the_identity():
    # the alternating sum of six identity maps vanishes
    g = trivial_lie_triality(sl2())
    assert check_lie_triality(g)["passed"]


def test_broken_sigma_is_rejected():
    g = broken_sigma(wreath_lie(sl2()))
    assert not validate_lie_triality(g)["passed"]
    result = check_lie_triality(g)
    assert not result["passed"]
    assert result["details"]["parts"] == {"identity": "fail", "signed_sum": "fail"}
    assert result["witness"]["part"] == "identity"
    assert result["witness"]["basis"] == 1


def test_signed_sum_catches_broken_s3_relations():
    # 1 + rho + rho^2 kills e1, e2; 1 - sigma sends e3 to -e1
    rho = QMatrix([[0, -1, 0], [1, -1, 0], [0, 0, 1]])
    sigma = QMatrix([[1, 0, 1], [0, 1, 0], [0, 0, 1]])
    g = LieWithTriality(StructureConstants(3, {}, bracket=True, name="ab3"), rho, sigma)
    result = check_lie_triality(g)
    assert not result["passed"]
    assert result["details"]["parts"] == {"identity": "pass", "signed_sum": "fail"}
    assert result["witness"]["part"] == "signed_sum"
    assert result["witness"]["basis"] == 3


def test_traceless_octonions_are_malcev_not_lie(octonions):
    m = malcev_bracket(octonions)
    assert m.dim == Limits.TRACELESS_DIM
    assert check_malcev(m)["passed"]
    assert not check_jacobi(m)["passed"]


def test_commutator_algebra_of_octonions(octonions):
    comm = commutator_algebra(octonions.structure)
    assert comm.is_anticommutative()
    assert check_malcev(comm)["passed"]


def test_relations_between_left_and_right_multiplications(octonions):
    result = check_pesh_relations(octonions)
    assert result["passed"], result["witness"]
    assert len(result["details"]["parts"]) == 3


def _octonion_operators(o):
    basis = o.traceless_basis()
    return [o.left(a) for a in basis], [o.right(a) for a in basis]


def test_perturbed_bracket_breaks_the_bracket_relations(octonions):
    lam, rho = _octonion_operators(octonions)
    m = perturb(malcev_bracket(octonions), 0, 1, 2, 1)
    result = check_pesh_operators(m, lam, rho)
    assert result["details"]["parts"] == {
        "[lambda_a, lambda_b]": "fail",
        "[rho_a, rho_b]": "fail",
        "[lambda_a, rho_b] = [rho_a, lambda_b]": "pass",
    }
    assert result["witness"]["part"] == "[lambda_a, lambda_b]"
    assert (result["witness"]["a"], result["witness"]["b"]) == (1, 2)


def test_shifted_right_operators_break_the_mixed_relation(octonions):
    lam, rho = _octonion_operators(octonions)
    shifted = rho[1:] + rho[:1]
    result = check_pesh_operators(malcev_bracket(octonions), lam, shifted)
    assert result["details"]["parts"]["[lambda_a, rho_b] = [rho_a, lambda_b]"] == "fail"


def test_relations_need_one_operator_per_basis_vector(octonions):
    lam, rho = _octonion_operators(octonions)
    with pytest.raises(DimensionMismatchError):
        check_pesh_operators(malcev_bracket(octonions), lam[:-1], rho)


def test_lie_of_traceless_octonions(octonions):
    lom = lie_of_malcev(octonions)
    assert lom.result["passed"], lom.result["witness"]
    assert lom.result["details"]["dim"] == 28
    assert lom.minus.dim == 7
    assert lom.plus.dim == 21


def test_bracket_of_a_basis_vector_with_itself_must_vanish():
    with pytest.raises(FormatError):
        StructureConstants.from_bracket_entries(2, [(0, 0, {1: 1})])


def test_is_lie():
    assert is_lie(sl2())
    assert not is_lie(perturb(sl2(), 1, 2, 1, 1))


def test_restriction_to_borel_subalgebra():
    # span{h, e} is closed: [h, e] = 2e
    borel = Subspace.from_vectors([(1, 0, 0), (0, 1, 0)], 3)
    b = restrict_to_subspace(sl2(), borel)
    assert b.dim == 2
    assert is_lie(b)
    assert b.mul(b.basis(0), b.basis(1)) == (q(0), q(2))


def test_restriction_needs_a_closed_subspace():
    with pytest.raises(DimensionMismatchError):
        restrict_to_subspace(sl2(), Subspace.from_vectors([(0, 1, 0), (0, 0, 1)], 3))
