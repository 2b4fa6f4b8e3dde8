import pytest

from triality.services.autotopy_service import AutotopyGroup
from triality.services.gtriality_service import conjugation_triality_s3, inversion_fixture_c4
from triality.services.hopf_service import (
    add,
    atp_target_assignment,
    check_commutation,
    check_generator_independence,
    check_hopf_axioms,
    check_hopf_triality,
    check_moufang_hopf,
    check_mh_matches_mloop,
    check_mult_alg_identities,
    check_p_antipode,
    element,
    group_algebra,
    loop_algebra,
    mh_subalgebra,
    mloop_target_assignment,
    p_map,
    scale,
    star,
    star_alt,
    sub,
    swap_assignment,
    verify_doro_target,
)
from triality.services.loop_service import nonmoufang_loop
from triality.services.qcore_service import ONE, q
from triality.utils.errors import UnsupportedInputError


@pytest.fixture(scope="module")
def wreath_algebra(s3_wreath):
    return group_algebra(s3_wreath)


def test_element_arithmetic():
    u = add(element("a"), element("b", 2))
    assert sub(u, element("a")) == {"b": q(2)}
    assert scale(0, u) == {}
    assert add(u, scale(-1, u)) == {}


def test_group_algebra_hopf_axioms():
    h = group_algebra(conjugation_triality_s3())
    result = check_hopf_axioms(h)
    assert result["passed"], result["witness"]


def test_group_algebra_of_triality_group(wreath_algebra):
    assert check_hopf_triality(wreath_algebra)["passed"]
    assert check_p_antipode(wreath_algebra)["passed"]


def test_group_algebra_without_triality():
    h = group_algebra(inversion_fixture_c4())
    result = check_hopf_triality(h)
    assert not result["passed"]
    assert "element" in result["witness"]


def test_triality_verdict_does_not_depend_on_generators(wreath_algebra):
    result = check_generator_independence(wreath_algebra)
    assert result["passed"]
    assert result["details"]["triality"]
    bad = check_generator_independence(group_algebra(inversion_fixture_c4()))
    assert bad["passed"]
    assert not bad["details"]["triality"]


def test_p_map_on_group_like(s3_wreath, wreath_algebra):
    g = s3_wreath.elements()[7]
    assert p_map(wreath_algebra, element(g)) == element(s3_wreath.mul(s3_wreath.sigma(g), s3_wreath.inv(g)))


def test_loop_algebra_requires_moufang():
    with pytest.raises(UnsupportedInputError):
        loop_algebra(nonmoufang_loop(5))


def test_loop_algebra_is_moufang_hopf(chein12):
    u = loop_algebra(chein12)
    assert check_hopf_axioms(u, with_triality=False)["passed"]
    result = check_moufang_hopf(u)
    assert result["passed"], result["witness"]
    assert result["details"]["associative"] is False
    assert len(result["details"]["nonassociative_triple"]) == 3


def test_mh_of_wreath_cube(wreath_algebra):
    res = mh_subalgebra(wreath_algebra)
    assert res.result["passed"], res.result["witness"]
    assert res.p_image.dim == 6
    assert len(res.mh.keys) == 6


def test_star_formulas_agree(s3_wreath, wreath_algebra):
    mh = mh_subalgebra(wreath_algebra).mh
    for a in mh.keys:
        for b in mh.keys:
            assert star(wreath_algebra, element(a), element(b)) == star_alt(wreath_algebra, element(a), element(b))
    unit = wreath_algebra.unit()
    assert star(wreath_algebra, unit, unit) == unit


def test_mh_matches_m_of_the_group(s3_wreath):
    result = check_mh_matches_mloop(s3_wreath)
    assert result["passed"], result["witness"]
    assert result["details"]["dim"] == 6


def test_multiplication_algebra_identities(chein12, o16):
    for loop in (chein12, o16):
        result = check_mult_alg_identities(loop_algebra(loop))
        assert result["passed"], result["witness"]


def test_doro_relations_in_atp_group_algebra(c4):
    atp = AutotopyGroup(c4)
    phi = atp_target_assignment(c4, atp)
    result = verify_doro_target(loop_algebra(c4), group_algebra(atp), phi)
    assert result["passed"], result["witness"]


def test_doro_relations_in_triality_group_algebra(s3_wreath, wreath_algebra):
    u, phi = mloop_target_assignment(s3_wreath)
    result = verify_doro_target(u, wreath_algebra, phi)
    assert result["passed"], result["witness"]


def test_corrupted_assignment_is_caught(c4):
    atp = AutotopyGroup(c4)
    phi = swap_assignment(atp_target_assignment(c4, atp), 0, 1)
    result = verify_doro_target(loop_algebra(c4), group_algebra(atp), phi)
    assert not result["passed"]
    assert result["witness"]["part"] == "unit"


def test_counit_of_p_values(wreath_algebra):
    for g in wreath_algebra.basis()[:10]:
        assert wreath_algebra.counit(p_map(wreath_algebra, element(g))) == ONE


def test_p_values_commute_under_rho(wreath_algebra):
    mh = mh_subalgebra(wreath_algebra).mh
    for m in mh.keys:
        u = element(m)
        assert check_commutation(wreath_algebra, u, 1, 1)
        assert check_commutation(wreath_algebra, u, 1, 0)
        assert check_commutation(wreath_algebra, u, 2, 1)
