import pytest

from triality.config import config
from triality.services.envelope_service import (
    EnvelopingAlgebra,
    act,
    check_action_identity,
    check_envelope_relations,
    check_lifted_automorphism,
    check_pbw_hopf_axioms,
    check_ug_triality,
    lift_auto,
    mh_envelope,
    monomials,
    p_span_check,
    pbw_antipode,
    pbw_coproduct,
    pbw_counit,
    pbw_product,
)
from triality.services.hopf_service import add, element, p_map, scale, sub
from triality.services.malcev_service import (
    broken_sigma,
    lie_of_malcev,
    nonabelian_2d,
    sl2,
    trivial_lie_triality,
    triality_autos_o,
    wreath_lie,
)
from triality.services.qcore_service import ONE
from triality.utils.errors import NotAutomorphismError


@pytest.fixture(scope="module")
def lie2wr():
    return wreath_lie(nonabelian_2d())


def test_monomial_count():
    # C(n + d, d) monomials of degree at most d
    assert len(monomials(2, 2)) == 6
    assert len(monomials(6, 3)) == 84
    assert monomials(3, 1) == [(), (2,), (1,), (0,)]


def test_straightening_uses_the_bracket():
    alg = EnvelopingAlgebra(trivial_lie_triality(nonabelian_2d()), 2)
    x, y = alg.generator(0), alg.generator(1)
    # x y = y x + [x, y] = y x + y
    assert alg.mul(x, y) == {(1, 0): ONE, (1,): ONE}
    assert alg.mul(y, x) == {(1, 0): ONE}


def test_primitive_hopf_structure():
    alg = EnvelopingAlgebra(trivial_lie_triality(sl2()), 2)
    e = alg.generator(1)
    assert alg.coproduct(e) == {((1,), ()): ONE, ((), (1,)): ONE}
    assert alg.antipode(e) == {(1,): -ONE}
    assert alg.counit(e) == 0


def test_pbw_hopf_axioms(lie2wr):
    alg = EnvelopingAlgebra(lie2wr, 2)
    result = check_pbw_hopf_axioms(alg)
    assert result["passed"], result["witness"]
    assert result["details"]["degree"] == 2


def test_lifted_automorphisms(lie2wr):
    alg = EnvelopingAlgebra(lie2wr, 2)
    assert check_lifted_automorphism(alg, alg.rho_map)["passed"]
    assert check_lifted_automorphism(alg, alg.sigma_map)["passed"]


def test_lift_rejects_non_automorphism(lie2wr):
    broken = broken_sigma(lie2wr)
    alg = EnvelopingAlgebra(lie2wr, 1)
    with pytest.raises(NotAutomorphismError):
        lift_auto(alg, broken.sigma)


def test_enveloping_algebra_has_triality(lie2wr):
    result = check_ug_triality(lie2wr, 3)
    assert result["passed"], result["witness"]
    assert result["details"]["monomials"] == 84
    assert result["details"]["lie_triality"]


def test_p_map_on_generators(lie2wr):
    alg = EnvelopingAlgebra(lie2wr, 1)
    a = alg.generator(0)
    assert p_map(alg, a) == sub(alg.sigma(a), a)


def test_adjoint_action_of_generator(lie2wr):
    alg = EnvelopingAlgebra(lie2wr, 1)
    x, y = alg.generator(0), alg.generator(1)
    # x . y = x y - y x = [x, y] = y
    assert act(alg, x, y) == y
    assert act(alg, alg.unit(), y) == y


def test_action_identity(lie2wr):
    result = check_action_identity(lie2wr, 3)
    assert result["passed"], result["witness"]


def test_p_values_span_circle_words(lie2wr):
    result = p_span_check(lie2wr, 2)
    assert result["passed"], result["witness"]
    assert result["details"]["e_minus_dim"] == 2


def test_sl2_wreath_triality():
    assert check_ug_triality(wreath_lie(sl2()), 2)["passed"]


@pytest.mark.slow
def test_enveloping_algebra_of_ortho_lie(ortho):
    g, _ = triality_autos_o(ortho)
    result = check_ug_triality(g, 2)
    assert result["passed"], result["witness"]


@pytest.fixture(scope="module")
def traceless_lie(octonions):
    return lie_of_malcev(octonions)


@pytest.mark.slow
def test_moufang_hopf_slice_of_traceless_octonions(traceless_lie):
    env = mh_envelope(traceless_lie, degree=2)
    assert env.result["passed"], env.result["witness"]
    assert env.malcev.dim == 7
    # every T_a o T_b with a <= b against every pair of generators
    assert env.result["counts"]["degree_two"] == 28 * 49
    assert env.result["counts"]["moufang_triples"] == 7 ** 3
    relations = check_envelope_relations(traceless_lie, env.malcev, slice_degree=1)
    assert relations["passed"], relations["witness"]


@pytest.mark.slow
def test_moufang_hopf_slice_samples_above_the_limit(traceless_lie, monkeypatch):
    monkeypatch.setattr(config, "EXHAUSTIVE_LIMIT", 400)
    env = mh_envelope(traceless_lie, degree=2, samples=5)
    assert env.result["passed"], env.result["witness"]
    assert env.result["counts"]["degree_two"] == 5


def test_unit_is_group_like(lie2wr):
    alg = EnvelopingAlgebra(lie2wr, 1)
    assert alg.coproduct(alg.unit()) == {((), ()): ONE}
    assert p_map(alg, element(())) == alg.unit()


def test_pbw_operations_on_sl2():
    alg = EnvelopingAlgebra(trivial_lie_triality(sl2()), 3)
    h, e, f = (alg.generator(i) for i in range(3))
    # e f = f e + h with f e stored as (2, 1)
    assert pbw_product(alg, e, f) == {(2, 1): ONE, (0,): ONE}
    assert pbw_product(alg, alg.unit(), e) == e
    ee = pbw_product(alg, e, e)
    assert pbw_coproduct(alg, ee) == {((1, 1), ()): ONE, ((1,), (1,)): ONE + ONE, ((), (1, 1)): ONE}
    assert pbw_antipode(alg, h) == {(0,): -ONE}
    assert pbw_counit(alg, ee) == 0


def test_pbw_product_is_associative(lie2wr):
    alg = EnvelopingAlgebra(lie2wr, 2)
    basis = [m for m in monomials(lie2wr.dim, 2) if m]
    for i in range(0, len(basis), 5):
        u, v, w = (element(basis[(i + k) % len(basis)]) for k in (0, 7, 13))
        assert pbw_product(alg, pbw_product(alg, u, v), w) == pbw_product(alg, u, pbw_product(alg, v, w))


def test_antipode_identity_on_sl2_monomials():
    alg = EnvelopingAlgebra(trivial_lie_triality(sl2()), 3)
    for m in monomials(3, 3):
        u = element(m)
        total = add(*(scale(c, alg.mul(alg.antipode(element(a1)), element(a2)))
                      for (a1, a2), c in alg.coproduct(u).items()))
        assert total == scale(alg.counit(u), alg.unit())
