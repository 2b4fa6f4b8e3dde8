import pytest

from triality.services.gtriality_service import (
    build_triality_group,
    check_s3_relations,
    check_section_independence,
    check_triality,
    conjugation_triality_s3,
    embed_into_autotopy,
    inversion_fixture_c4,
    moufang_from_triality,
    s3_center,
    trivial_action,
    triality_group_from_table,
    with_trivial_factor,
    wreath_cube,
)
from triality.services.loop_service import cyclic_group, identity_perm, is_moufang, verify_doro_relations
from triality.utils.errors import NotAutomorphismError, TrialityError


def test_wreath_cube_has_triality(s3_wreath):
    assert s3_wreath.order == 216
    assert check_s3_relations(s3_wreath)["passed"]
    assert check_triality(s3_wreath)["passed"]


def test_m_of_wreath_cube_is_a_copy_of_s3(s3_wreath):
    mres = moufang_from_triality(s3_wreath)
    assert mres.loop.order == 6
    assert mres.carrier[0] == s3_wreath.identity
    assert mres.moufang["passed"]
    assert verify_doro_relations(mres.loop)["passed"]


def test_section_choice_does_not_matter(s3_wreath):
    assert check_section_independence(s3_wreath)["passed"]


def test_inversion_fixture_fails_triality():
    g = inversion_fixture_c4()
    assert check_s3_relations(g)["passed"]
    result = check_triality(g)
    assert not result["passed"]
    assert "element" in result["witness"]


def test_trivial_action_gives_trivial_loop(s3):
    g = trivial_action(s3)
    assert check_triality(g)["passed"]
    assert moufang_from_triality(g).loop.order == 1


def test_conjugation_triality_on_s3():
    g = conjugation_triality_s3()
    assert check_triality(g)["passed"]
    mres = moufang_from_triality(g)
    assert mres.loop.order == 3
    assert is_moufang(mres.loop)


def test_s3_center_of_wreath_cube_is_trivial(s3_wreath):
    center = s3_center(s3_wreath)
    assert center.elements == [s3_wreath.identity]
    assert center.normal


def test_embedding_into_autotopies_is_injective(s3_wreath):
    embedding = embed_into_autotopy(s3_wreath)
    assert embedding.result["passed"], embedding.result["witness"]
    assert embedding.result["details"]["injective"]
    assert embedding.kernel == [s3_wreath.identity]


def test_embedding_kernel_is_the_s3_center():
    # G abelian: the diagonal (z, z, z) is central and fixed by S3
    g = wreath_cube(cyclic_group(2))
    embedding = embed_into_autotopy(g)
    assert embedding.result["passed"], embedding.result["witness"]
    assert embedding.result["details"]["kernel_order"] == 2
    assert not embedding.result["details"]["injective"]
    assert len(s3_center(g).elements) == 2


def test_rho_must_be_an_automorphism(s3):
    bad = (0, 2, 1, 3, 4, 5)
    with pytest.raises(NotAutomorphismError):
        build_triality_group(s3, bad, identity_perm(6))


def test_s3_relations_are_enforced():
    c3 = cyclic_group(3)
    # x -> -x has order 2, so it cannot serve as rho
    inversion = (0, 2, 1)
    with pytest.raises(NotAutomorphismError):
        build_triality_group(c3, inversion, identity_perm(3))


def test_table_must_be_a_group(chein12):
    table = [list(row) for row in chein12.rows()]
    with pytest.raises(TrialityError):
        triality_group_from_table(table, identity_perm(12), identity_perm(12))


def test_trivial_factor_leaves_m_unchanged():
    g = with_trivial_factor(conjugation_triality_s3(), cyclic_group(2))
    assert g.order == 12
    assert check_triality(g)["passed"]
    assert moufang_from_triality(g).loop.order == 3
    assert len(s3_center(g).elements) >= 2
