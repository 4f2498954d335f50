import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mutheta.exactring import (
    OneForm,
    QuadExtField,
    SquareZeroRing,
    TruncWittRing,
    d,
    default_nonresidue,
    frobenius,
    is_odd_prime,
    sqrt_mod_prime_power,
)

RINGS = [(p, s) for p in (3, 5, 7, 11) for s in (1, 2, 3)]


@st.composite
def ring_and_elems(draw, count=3):
    p, s = draw(st.sampled_from(RINGS))
    R = TruncWittRing(p, s)
    coeff = st.integers(min_value=0, max_value=R.q - 1)
    return R, [R(draw(coeff), draw(coeff)) for _ in range(count)]


@settings(max_examples=300, deadline=None)
@given(ring_and_elems())
def test_ring_axioms(data):
    R, (a, b, c) = data
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + R.zero == a and a * R.one == a
    assert a - a == R.zero


@settings(max_examples=300, deadline=None)
@given(ring_and_elems(count=2))
def test_frobenius_is_a_ring_automorphism_of_order_two(data):
    R, (a, b) = data
    assert frobenius(a + b) == frobenius(a) + frobenius(b)
    assert frobenius(a * b) == frobenius(a) * frobenius(b)
    assert frobenius(frobenius(a)) == a


@settings(max_examples=200, deadline=None)
@given(ring_and_elems(count=1))
def test_units_are_exactly_nonzero_residues(data):
    R, (a,) = data
    assert a.is_unit() == bool(a.residue())
    if a.is_unit():
        assert a * a.inverse() == R.one
    else:
        with pytest.raises(ZeroDivisionError):
            a.inverse()


@pytest.mark.parametrize("p", [3, 5, 7, 11, 13])
def test_frobenius_is_pth_power_on_the_field(p):
    k = QuadExtField(p)
    for x in k.elements():
        assert frobenius(x) == x**p


@pytest.mark.parametrize("p", [3, 5, 7, 11])
def test_field_has_no_zero_divisors(p):
    k = QuadExtField(p)
    nonzero = list(k.nonzero_elements())
    assert len(nonzero) == p * p - 1
    assert all(x.is_unit() for x in nonzero)
    # multiplicative group is cyclic of order p^2 - 1
    assert all(x ** (p * p - 1) == k.one for x in nonzero)


def test_x_squared_is_the_nonresidue():
    for p in (3, 5, 7, 11, 13):
        k = QuadExtField(p)
        c = default_nonresidue(p)
        assert k.gen * k.gen == k(c)
        assert pow(c, (p - 1) // 2, p) == p - 1


def test_frobenius_of_gen_over_f9():
    k = QuadExtField(3)
    assert frobenius(k.gen) == -k.gen


def test_witt_ring_reduces_to_field():
    W = TruncWittRing(5, 3)
    a = W(126, 7)
    assert a.residue() == QuadExtField(5)(1, 2)
    assert W(5, 0).is_unit() is False
    assert W(5, 1).is_unit() is True


@pytest.mark.parametrize("p,s", [(3, 1), (3, 4), (7, 2), (11, 3)])
def test_hensel_square_roots(p, s):
    q = p**s
    for a in range(1, p):
        if pow(a, (p - 1) // 2, p) == 1:
            r = sqrt_mod_prime_power(a, p, s)
            assert r * r % q == a % q
            # lifting a unit that is not reduced mod p
            b = a + p * (p - 1)
            r = sqrt_mod_prime_power(b, p, s)
            assert r * r % q == b % q


def test_sqrt_neg_squares_to_minus_d():
    for p, s in [(3, 1), (5, 2), (7, 3), (11, 1)]:
        W = TruncWittRing(p, s)
        r = W.sqrt_neg(58)
        assert r * r == W(-58)


def test_sqrt_neg_rejects_split_primes():
    # -58 is a square mod 31 (and 29 is ramified)
    with pytest.raises(ValueError):
        TruncWittRing(31).sqrt_neg(58)


@pytest.mark.parametrize("bad", [2, 4, 9, 1, 0, -3, 3.0, True])
def test_invalid_primes_rejected(bad):
    assert not is_odd_prime(bad)
    with pytest.raises(ValueError):
        TruncWittRing(bad)


def test_invalid_length_rejected():
    with pytest.raises(ValueError):
        TruncWittRing(5, 0)


def test_mixing_rings_is_an_error():
    with pytest.raises(ValueError):
        QuadExtField(3).one + QuadExtField(5).one


def test_elements_are_immutable():
    x = QuadExtField(5)(1, 2)
    with pytest.raises(AttributeError):
        x.a = 3


# square-zero extensions


@pytest.fixture
def R():
    return SquareZeroRing(QuadExtField(5), ["u", "v", "u1"])


def test_parameters_multiply_to_zero(R):
    u, v = R.t("u"), R.t("v")
    assert u * v == 0
    assert u * u == 0
    assert (1 + u) * (1 - u) == 1


def test_d_is_a_derivation(R):
    u, u1, v = R.t("u"), R.t("u1"), R.t("v")
    assert d(u * u1) == 0
    assert d(u + 3 * v) == OneForm.basis(R, "u") + OneForm.basis(R, "v") * 3
    a = R(2) + u
    b = R(3) + v
    assert d(a * b) == d(a) * b.const + d(b) * a.const


def test_frobenius_kills_the_ideal(R):
    x = R(R.base(1, 1), {"u": 2, "v": 1})
    assert frobenius(x) == R(R.base(1, 1) ** 5)


def test_square_zero_units(R):
    x = R(3) + R.t("u")
    assert x.is_unit()
    assert x * x.inverse() == 1
    assert not R.t("u").is_unit()
    with pytest.raises(ZeroDivisionError):
        R.t("u").inverse()


def test_square_zero_needs_a_field():
    with pytest.raises(ValueError):
        SquareZeroRing(TruncWittRing(5, 2), ["u"])


def test_duplicate_parameters_rejected():
    with pytest.raises(ValueError):
        SquareZeroRing(QuadExtField(3), ["u", "u"])


def test_d_rejects_plain_field_elements():
    with pytest.raises(TypeError):
        d(QuadExtField(3).one)
