import pytest

from triality.services.autotopy_service import (
    AutotopyGroup,
    atp_rho,
    atp_sigma,
    autotopy_group,
    autotopy_group_brute_force,
    canonical_triples,
    check_atp_triality,
    check_power_bracketing,
    companion_of,
    decompose_autotopy,
    is_autotopy,
    m_of_atp,
    pseudoautomorphism_group,
    psi_iso,
    triality_action_atp,
    w_group,
)
from triality.services.loop_service import identity_perm


@pytest.fixture(scope="module")
def atp_c4(c4):
    return AutotopyGroup(c4)


@pytest.fixture(scope="module")
def atp_chein12(chein12):
    return AutotopyGroup(chein12)


def test_identity_triple_is_an_autotopy(chein12):
    ident = identity_perm(12)
    assert is_autotopy(chein12, ident, ident, ident)["passed"]


def test_non_autotopy_reports_least_pair(c4):
    swap = (1, 0, 2, 3)
    ident = identity_perm(4)
    result = is_autotopy(c4, swap, ident, ident)
    assert not result["passed"]
    assert result["witness"]["x"] == 1 and result["witness"]["y"] == 1


def test_backtracking_matches_brute_force(c4):
    assert autotopy_group(c4) == autotopy_group_brute_force(c4)


def test_atp_of_cyclic_group_order(atp_c4):
    # |G|^2 |Aut(G)| for a group G
    assert atp_c4.order == 32


def test_canonical_triples_are_autotopies(chein12):
    for x in range(chein12.order):
        for name, triple in canonical_triples(chein12, x).items():
            assert is_autotopy(chein12, *triple)["passed"], (name, x)


def test_triality_action_preserves_autotopies(chein12, atp_chein12):
    for t in atp_chein12.elements()[:20]:
        assert is_autotopy(chein12, *atp_rho(chein12, t))["passed"]
        assert is_autotopy(chein12, *atp_sigma(chein12, t))["passed"]


def test_atp_is_a_group_with_triality(c4, chein12, atp_c4, atp_chein12):
    for q, atp in ((c4, atp_c4), (chein12, atp_chein12)):
        result = check_atp_triality(q, atp)
        assert result["passed"], result["witness"]
        assert result["details"]["exhaustive"]


def test_m_of_atp_recovers_the_loop(chein12, atp_chein12):
    res = m_of_atp(chein12, atp_chein12)
    assert res.result["passed"], res.result["witness"]
    assert res.mloop.loop.order == 12
    assert sorted(res.mapping) == list(range(12))


def test_pseudoautomorphisms_of_cyclic_group(c4, atp_c4):
    # Aut(C4) with any companion
    res = pseudoautomorphism_group(c4, atp_c4.elements())
    assert res.result["passed"], res.result["witness"]
    assert len(res.elements) == 8


def test_pseudoautomorphisms_agree_on_chein_loop(chein12, atp_chein12):
    res = pseudoautomorphism_group(chein12, atp_chein12.elements())
    assert res.result["passed"], res.result["witness"]
    assert len(res.elements) * 12 == atp_chein12.order


def test_w_group_is_a_group_with_triality(c4):
    res = w_group(c4)
    assert res.result["passed"], res.result["witness"]
    assert res.group.order == 32


def test_psi_is_an_isomorphism(c4, chein12, atp_c4, atp_chein12):
    for q, atp in ((c4, atp_c4), (chein12, atp_chein12)):
        res = psi_iso(q, atp)
        assert res.result["passed"], res.result["witness"]
        assert len(set(res.mapping.values())) == atp.order


def test_every_autotopy_decomposes(chein12, atp_chein12):
    for t in atp_chein12.elements():
        assert decompose_autotopy(chein12, t).result["passed"]


def test_power_bracketing_in_moufang_loop(chein12):
    assert check_power_bracketing(chein12)["passed"]


@pytest.mark.slow
def test_atp_of_octonion_units(o16):
    result = check_atp_triality(o16)
    assert result["passed"], result["witness"]
    assert m_of_atp(o16).result["passed"]


def test_triality_action_on_a_single_triple(chein12, atp_chein12):
    ident = identity_perm(12)
    image, result = triality_action_atp(chein12, (ident, ident, ident), "rho")
    assert image == (ident, ident, ident)
    assert result["passed"]
    t = atp_chein12.elements()[5]
    image, result = triality_action_atp(chein12, t, "sigma")
    assert result["passed"], result["witness"]
    assert image == atp_sigma(chein12, t)


def test_companions_in_an_abelian_group(c4):
    # every element is a companion of an automorphism of an abelian group
    assert companion_of(c4, identity_perm(4)) == [0, 1, 2, 3]
    assert companion_of(c4, (0, 3, 2, 1)) == [0, 1, 2, 3]
