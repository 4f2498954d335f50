import random

import pytest

from mutheta import linalg
from mutheta.exactring import TruncWittRing
from mutheta.fjexp import (
    FJExpansion,
    HermIndex,
    check_cycle,
    closure_identity,
    coefficient_action,
    cycle_report,
    expansion,
    gamma_act,
    hasse_expansion,
    hasse_mult,
    in_positive_cone,
    is_in_theta_kernel,
    multiply,
    odet,
    oinverse,
    omatmul,
    omul,
    random_expansion,
    random_gamma,
    random_index,
    theta,
    theta_iterate,
    to_ring,
)
from mutheta.weights import WeightTag


def test_theta_scalar_example():
    f = expansion(3, {1: 1, 2: 1}, trunc=10)
    assert theta(f).same_terms(expansion(3, {1: 1, 2: 2}))
    assert theta(f).weight == WeightTag(None, 1)


def test_theta_kills_multiples_of_p():
    f = expansion(5, {5: 1, 10: 3, 7: 2})
    assert theta(f).same_terms(expansion(5, {7: 4}))
    assert is_in_theta_kernel(expansion(5, {0: 1, 5: 2, 25: 1}))
    assert not is_in_theta_kernel(f)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_theta_p_minus_one_is_identity_only_on_the_image(p):
    f = expansion(p, {1: 1, p: 1, p + 2: 3})
    assert not theta_iterate(f, p - 1).same_terms(f)
    g = theta(f)
    assert theta_iterate(g, p - 1).same_terms(g)
    assert theta_iterate(g, 0) is g


def test_theta_iterate_negative():
    with pytest.raises(ValueError):
        theta_iterate(expansion(3, {1: 1}), -1)


def test_hasse_multiplication_shifts_weight():
    f = expansion(5, {1: 2, 3: 1}, weight=12)
    hf = hasse_mult(f)
    assert hf.weight == WeightTag(36)
    assert hf.same_terms(f)
    h = hasse_expansion(5, trunc=20)
    assert multiply(h, f).same_terms(f)
    assert multiply(h, f).weight == WeightTag(36)
    assert hasse_mult(expansion(3, {1: 1})).weight == WeightTag(8)


def test_multiply_truncates_and_adds_weights():
    f = expansion(7, {1: 1, 4: 2}, trunc=6, weight=3)
    g = expansion(7, {2: 1, 5: 3}, trunc=8, weight=4)
    fg = multiply(f, g)
    assert fg.trunc == 6
    assert fg.same_terms(expansion(7, {3: 1, 6: 2 + 3}))
    assert fg.weight == WeightTag(7)


def test_multiply_needs_rank_one():
    f = random_expansion(3, random.Random(0), m=2, trunc=10, size=3)
    with pytest.raises(ValueError):
        multiply(theta(f), f)
    with pytest.raises(ValueError):
        multiply(expansion(3, {1: 1}), expansion(5, {1: 1}))


def test_leibniz_over_witt_vectors():
    rng = random.Random(11)
    for p in (3, 5):
        for _ in range(20):
            f = random_expansion(p, rng, s=3, trunc=50)
            g = random_expansion(p, rng, s=3, trunc=50)
            lhs = theta(multiply(f, g))
            rhs = multiply(theta(f), g) + multiply(f, theta(g))
            assert lhs.same_terms(rhs)


# indices and the cone


def test_index_must_be_hermitian_and_psd():
    with pytest.raises(ValueError):
        HermIndex.of([[(1, 0), (1, 1)], [(1, 1), (1, 0)]])
    h = HermIndex.of([[0, 0], [0, -1]])
    # leading minors are 0 and 0, yet h is not semidefinite
    assert not in_positive_cone(h)
    assert in_positive_cone(HermIndex.of([[1, (0, 0)], [(0, 0), 0]]))
    with pytest.raises(ValueError):
        FJExpansion(TruncWittRing(3), 2, {h: (1,)})


def test_cone_examples():
    assert in_positive_cone(HermIndex.of([[59, (1, 1)], [(1, -1), 1]]))  # det = 59 - 59 = 0
    assert not in_positive_cone(HermIndex.of([[58, (1, 1)], [(1, -1), 1]]))  # det = -1


def test_index_keys_round_trip():
    rng = random.Random(2)
    for m in (1, 2, 3):
        for _ in range(20):
            h = random_index(m, 40, rng)
            assert HermIndex.from_key(h.key(), m) == h
    with pytest.raises(ValueError):
        HermIndex.from_key("1:0,2:0", 2)


def test_gamma_action_is_a_left_action_preserving_the_cone():
    rng = random.Random(3)
    for m in (2, 3):
        for _ in range(20):
            g1, g2 = random_gamma(m, rng), random_gamma(m, rng)
            assert odet(g1) in ((1, 0), (-1, 0))
            h = random_index(m, 30, rng)
            assert in_positive_cone(h.act(g1))
            assert h.act(omatmul(g1, g2)) == h.act(g2).act(g1)
            ident = [[(1 if i == j else 0, 0) for j in range(m)] for i in range(m)]
            assert h.act(ident) == h
            assert omatmul(g1, oinverse(g1)) == ident


def test_non_unimodular_gamma_rejected():
    with pytest.raises(ValueError):
        oinverse([[(2, 0), (0, 0)], [(0, 0), (1, 0)]])


def test_cone_closed_under_addition():
    rng = random.Random(4)
    for _ in range(100):
        a, b = random_index(2, 25, rng), random_index(2, 25, rng)
        assert in_positive_cone(a + b)


@pytest.mark.parametrize("p,s", [(3, 1), (5, 2), (7, 3)])
def test_index_reduction(p, s):
    W = TruncWittRing(p, s)
    root = to_ring((0, 1), W)
    assert root * root == W(-58)
    z, w = (3, 2), (-1, 5)
    assert to_ring(omul(z, w), W) == to_ring(z, W) * to_ring(w, W)


# theta for m = 2


def test_theta_tensor_formula_m2():
    rng = random.Random(5)
    f = random_expansion(5, rng, m=2, trunc=20, size=6)
    tf = theta(f)
    assert tf.coeff_rank == 4
    for h, a in f.terms.items():
        assert tf.coeff(h) == tuple(x * y for x in a for y in h.vec(f.ring))
    ttf = theta(tf)
    assert ttf.coeff_rank == 16 and ttf.theta_count == 2


@pytest.mark.parametrize("p,s", [(3, 1), (5, 1), (5, 2)])
def test_gamma_equivariance(p, s):
    rng = random.Random(p * s)
    for _ in range(10):
        g = random_gamma(2, rng)
        f = random_expansion(p, rng, m=2, s=s, trunc=20, size=6)
        assert theta(gamma_act(g, f)).same_terms(gamma_act(g, theta(f)))
        assert gamma_act(g, f).trunc is None


def test_coefficient_action_is_multiplicative():
    rng = random.Random(6)
    f = theta(theta(random_expansion(3, rng, m=2, trunc=10, size=3)))
    R = f.ring
    for _ in range(5):
        g1, g2 = random_gamma(2, rng), random_gamma(2, rng)
        lhs = coefficient_action(omatmul(g1, g2), f)
        rhs = linalg.mat_mul(coefficient_action(g1, f), coefficient_action(g2, f), R)
        assert lhs == rhs


# theta cycles


def test_cycle_example():
    rep = cycle_report(12, 2, 5)
    assert rep["weights"] == [12, 18, 24, 6, 12]
    assert rep["closes"] and rep["congruences"]


def test_cycle_negative_control():
    rep = check_cycle([12, 18, 24, 10, 16], 12, 5)
    assert not rep["closes"]
    assert not rep["congruences"]
    assert rep["bad_positions"] == [3, 4]


def test_cycle_drop_position_bounds():
    with pytest.raises(ValueError):
        cycle_report(12, 4, 5)
    with pytest.raises(ValueError):
        cycle_report(12, -1, 5)


def test_closure_identity():
    assert all(closure_identity(p) == 0 for p in (2, 3, 5, 7, 97, 101))
