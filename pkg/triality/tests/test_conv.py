import pytest

from triality.services.conv_service import (
    ConvContext,
    ConvOperator,
    GroupLikeCoalgebra,
    atpc_membership,
    atpc_rho,
    atpc_sigma,
    atpc_triality_checks,
    canonical_conv_triples,
    check_conv_algebra,
    check_morphism_isomorphism,
    convolution_loop,
    g_identity,
    g_inverse,
    g_membership,
    g_product,
    lifted_ops,
    morphism_product,
    operator_from_g,
    to_g_element,
)
from triality.services.loop_service import is_moufang
from triality.services.qcore_service import QMatrix
from triality.utils.errors import CapExceededError, DimensionMismatchError, UnsupportedInputError


def test_convolution_is_pointwise(c4):
    c = GroupLikeCoalgebra(2)
    assert morphism_product(c, c4, (1, 2), (3, 3)) == (c4.mul(1, 3), c4.mul(2, 3))


def test_convolution_loop_of_chein_loop(chein12):
    res = convolution_loop(GroupLikeCoalgebra(2), chein12)
    assert res.result["passed"], res.result["witness"]
    assert res.loop.order == 144
    assert is_moufang(res.loop)
    assert res.morphisms[0] == (0, 0)


def test_convolution_loop_respects_the_cap(chein12):
    # 12^3 = 1728 morphisms
    with pytest.raises(CapExceededError):
        convolution_loop(GroupLikeCoalgebra(3), chein12)


def test_convolution_algebra_laws():
    result = check_conv_algebra(GroupLikeCoalgebra(2), 3, seed=7, samples=20)
    assert result["passed"], result["witness"]


def test_group_membership():
    perm = ((1, 2, 0), (0, 1, 2))
    op = operator_from_g(perm, 3)
    assert g_membership(op)["passed"]
    assert to_g_element(op) == perm


def test_non_group_like_images_are_rejected():
    shear = QMatrix([[1, 1], [0, 1]])
    result = g_membership(ConvOperator((shear,)))
    assert not result["passed"]
    assert result["witness"]["condition"] == "counit"

    spread = QMatrix([[2, 0], [-1, 1]])
    op = ConvOperator((spread,))
    assert g_membership(op)["witness"]["condition"] == "coproduct"
    with pytest.raises(UnsupportedInputError):
        to_g_element(op)


def test_group_law(c4):
    c = GroupLikeCoalgebra(2)
    one = g_identity(c, c4)
    a = ((1, 2, 3, 0), (3, 0, 1, 2))
    assert g_product(a, one) == a
    assert g_product(a, g_inverse(a)) == one


def test_context_needs_a_point(c4):
    with pytest.raises(DimensionMismatchError):
        ConvContext(GroupLikeCoalgebra(0), c4)


def test_lifted_operators(chein12):
    ctx = ConvContext(GroupLikeCoalgebra(2), chein12)
    a = ctx.from_morphism("L", (3, 7))
    lifts, result = lifted_ops(ctx, a)
    assert result["passed"], result["witness"]
    assert lifts.L == ctx.lift("L", a)


def test_canonical_triples_are_autotopies(chein12):
    ctx = ConvContext(GroupLikeCoalgebra(1), chein12)
    for theta in ((0,), (5,), (11,)):
        a = ctx.from_morphism("L", theta)
        for name, t in canonical_conv_triples(ctx, a).items():
            assert atpc_membership(ctx, t)["passed"], name
            assert atpc_membership(ctx, atpc_rho(ctx, t))["passed"], name
            assert atpc_membership(ctx, atpc_sigma(ctx, t))["passed"], name


def test_identity_triple_is_an_autotopy(c4):
    c = GroupLikeCoalgebra(2)
    ctx = ConvContext(c, c4)
    one = g_identity(c, c4)
    assert atpc_membership(ctx, (one, one, one))["passed"]
    shift = ((1, 2, 3, 0), (1, 2, 3, 0))
    result = atpc_membership(ctx, (shift, one, one))
    assert not result["passed"]
    assert result["witness"]["point"] == 1


def test_atp_c_triality_on_chein_loop(chein12):
    report = atpc_triality_checks(GroupLikeCoalgebra(1), chein12, samples=8, seed=3)
    assert report.result["passed"], report.result["witness"]
    assert report.canonical == 36
    assert report.products == 8


def test_atp_c_triality_on_two_points(c4):
    report = atpc_triality_checks(GroupLikeCoalgebra(2), c4, samples=8, seed=3)
    assert report.result["passed"], report.result["witness"]
    assert report.canonical == 48


def test_morphisms_embed_into_m(chein12):
    ctx = ConvContext(GroupLikeCoalgebra(1), chein12)
    result = check_morphism_isomorphism(ctx, seed=1)
    assert result["passed"], result["witness"]
    assert result["details"]["morphisms"] == 12


@pytest.mark.slow
def test_atp_c_triality_on_octonion_units(o16):
    report = atpc_triality_checks(GroupLikeCoalgebra(1), o16, samples=16)
    assert report.result["passed"], report.result["witness"]
