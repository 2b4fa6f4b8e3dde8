import pytest

from triality.services.loop_service import (
    DORO_FAMILIES,
    associativity_witness,
    check_inverse_property,
    check_loop,
    check_moufang,
    compose,
    cyclic_group,
    direct_product,
    generating_sequence,
    identity_perm,
    invert,
    is_associative,
    is_moufang,
    loop_to_text,
    multiplication_group,
    nonmoufang_loop,
    parse_loop_text,
    require_group,
    subloop_closure,
    verify_doro_relations,
    verify_doro_symmetry,
)
from triality.utils.errors import FormatError, NoUnitError, NotAGroupError, NotLatinSquareError


def test_compose_applies_left_factor_first():
    f = (1, 2, 0)
    g = (0, 2, 1)
    # 0 -f-> 1 -g-> 2
    assert compose(f, g)[0] == 2
    assert compose(f, invert(f)) == identity_perm(3)


def test_check_loop_rejects_repeated_row_entry():
    with pytest.raises(NotLatinSquareError) as excinfo:
        check_loop([[0, 1, 2], [1, 1, 0], [2, 0, 1]])
    assert excinfo.value.kind in ("row", "column")


def test_check_loop_rejects_missing_unit():
    # x*y = -x-y mod 3
    with pytest.raises(NoUnitError, match="no two-sided unit"):
        check_loop([[0, 2, 1], [2, 1, 0], [1, 0, 2]])


def test_check_loop_rejects_unit_not_first():
    # Z3 with the unit at index 2
    with pytest.raises(NoUnitError, match="unit element must be index 1"):
        check_loop([[2, 0, 1], [0, 1, 2], [1, 2, 0]])


def test_check_loop_rejects_out_of_range_entry():
    with pytest.raises(FormatError):
        check_loop([[0, 5], [1, 0]])


def test_parse_loop_text_round_trip(chein12):
    text = loop_to_text(chein12)
    assert parse_loop_text(text, chein12.name) == chein12


def test_parse_loop_text_reports_line():
    with pytest.raises(FormatError) as excinfo:
        parse_loop_text("2\n1 2\n2 x\n")
    assert excinfo.value.line == 3


def test_parse_loop_text_row_count():
    with pytest.raises(FormatError):
        parse_loop_text("3\n1 2 3\n2 3 1\n")


def test_groups_are_moufang_and_associative(s3, c4):
    for q in (s3, c4, cyclic_group(7)):
        assert is_moufang(q)
        assert is_associative(q)
        require_group(q)


def test_chein_loop_is_moufang_and_nonassociative(chein12):
    assert chein12.order == 12
    result = check_moufang(chein12)
    assert result["passed"]
    assert result["details"]["parts"] == {"left": "pass", "middle": "pass", "right": "pass"}
    assert associativity_witness(chein12) is not None
    with pytest.raises(NotAGroupError):
        require_group(chein12)


def test_octonion_units(o16):
    assert o16.order == 16
    assert is_moufang(o16)
    assert not is_associative(o16)
    assert check_inverse_property(o16)["passed"]


def test_nonmoufang_loop_gives_witness():
    q = nonmoufang_loop(5)
    assert q.order == 5
    result = check_moufang(q)
    assert not result["passed"]
    assert result["details"]["parts"]["left"] == "fail"
    assert result["witness"]["part"] == "left"
    assert {"a", "x", "y", "lhs", "rhs"} <= set(result["witness"])
    assert result["witness"]["lhs"] != result["witness"]["rhs"]


def test_nonmoufang_loop_is_seeded():
    assert nonmoufang_loop(5, seed=3) == nonmoufang_loop(5, seed=3)


def test_doro_relations_hold_on_moufang_loops(c4, s3, chein12):
    for q in (c4, s3, chein12):
        result = verify_doro_relations(q)
        assert result["passed"], result["witness"]
        assert result["counts"]["families"] == DORO_FAMILIES == 12


def test_doro_relations_hold_on_octonion_units(o16):
    assert verify_doro_relations(o16)["passed"]


def test_doro_block_is_closed_under_rotation(chein12):
    result = verify_doro_symmetry(chein12)
    assert result["passed"]


def test_multiplication_group_of_abelian_group_is_regular(c4):
    mult = multiplication_group(c4)
    assert mult.order == 4


def test_multiplication_group_of_s3(s3):
    # generated by left and right translations: S3 x S3 acting on 6 points
    assert multiplication_group(s3).order == 36


def test_subloops_and_generators(chein12, c4):
    assert subloop_closure(c4, [2]) == [0, 2]
    assert subloop_closure(c4, [1]) == [0, 1, 2, 3]
    gens = generating_sequence(chein12)
    assert subloop_closure(chein12, gens) == list(range(12))


def test_direct_product_order(s3, c4):
    assert direct_product(s3, c4).order == 24
