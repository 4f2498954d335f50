import random
from itertools import permutations

import pytest

from mutheta import linalg
from mutheta.exactring import QuadExtField, SquareZeroRing, TruncWittRing
from mutheta.semilinear import TwistedMap, compose, frobenius_twist


def leibniz_det(A, ring):
    n = len(A)
    total = ring.zero
    for perm in permutations(range(n)):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        term = ring.one
        for i in range(n):
            term = term * A[i][perm[i]]
        total = total + term if inv % 2 == 0 else total - term
    return total


def rand_matrix(ring, r, c, rng, density=1.0):
    return [[ring.random_element(rng) if rng.random() < density else ring.zero for _ in range(c)] for _ in range(r)]


@pytest.mark.parametrize("p,s", [(3, 1), (5, 1), (5, 2), (7, 3)])
def test_det_matches_leibniz(p, s):
    rng = random.Random(p * 10 + s)
    R = TruncWittRing(p, s)
    for n in range(0, 5):
        for _ in range(15):
            A = rand_matrix(R, n, n, rng, density=0.6)
            assert linalg.det(A, R) == leibniz_det(A, R)


def test_det_over_square_zero_ring():
    R = SquareZeroRing(QuadExtField(5), ["u", "u1", "w1"])
    u, u1, w1 = R.t("u"), R.t("u1"), R.t("w1")
    A = [[u, u1], [w1, R.one]]
    assert linalg.det(A, R) == u
    B = [[u, u1], [w1, u1]]
    assert linalg.det(B, R) == 0
    assert linalg.det(B, R) == leibniz_det(B, R)


@pytest.mark.parametrize("p", [3, 7])
def test_inverse_and_rank(p):
    rng = random.Random(p)
    k = QuadExtField(p)
    for n in range(1, 5):
        for _ in range(10):
            A = rand_matrix(k, n, n, rng)
            if linalg.det(A, k):
                Ai = linalg.inverse(A, k)
                assert linalg.mat_mul(A, Ai, k) == linalg.identity(k, n)
                assert linalg.rank(A) == n
            else:
                assert linalg.rank(A) < n
                with pytest.raises(ZeroDivisionError):
                    linalg.inverse(A, k)


def test_nullspace_is_the_kernel():
    rng = random.Random(1)
    k = QuadExtField(5)
    for _ in range(20):
        A = rand_matrix(k, 3, 5, rng, density=0.5)
        N = linalg.nullspace(A, k)
        assert len(N) == 5 - linalg.rank(A)
        for v in N:
            assert not any(linalg.mat_vec(A, v, k))


def test_same_span():
    k = QuadExtField(3)
    e = lambda i: [k.one if j == i else k.zero for j in range(3)]  # noqa: E731
    assert linalg.same_span([e(0), e(1)], [linalg.mat_add([e(0)], [e(1)])[0], e(1)])
    assert not linalg.same_span([e(0)], [e(1)])


def test_solve_in_span():
    k = QuadExtField(7)
    gens = [[k(1), k(0), k(2)], [k(0), k(1), k(3)]]
    w = [k(2), k(5), k(2 * 2 + 5 * 3)]
    assert linalg.solve_in_span(gens, w, k) == [k(2), k(5)]
    with pytest.raises(ValueError):
        linalg.solve_in_span(gens, [k(0), k(0), k(1)], k)


def test_mat_mul_shape_check():
    k = QuadExtField(3)
    with pytest.raises(ValueError):
        linalg.mat_mul(linalg.identity(k, 2), linalg.identity(k, 3), k)


# twisted maps


def _tm(k, rng, r, c, twist):
    return TwistedMap(k, rand_matrix(k, r, c, rng), twist)


def test_composition_twists_add_and_is_associative():
    rng = random.Random(3)
    k = QuadExtField(5)
    for _ in range(20):
        A, B, C = _tm(k, rng, 2, 3, 1), _tm(k, rng, 3, 4, 2), _tm(k, rng, 4, 2, 1)
        AB = compose(A, B)
        assert AB.twist == 3
        assert AB.matrix == tuple(map(tuple, linalg.mat_mul(linalg.mat_frobenius(A.rows(), 2), B.rows(), k)))
        assert compose(AB, C).matrix == compose(A, compose(B, C)).matrix


def test_twist_zero_is_plain_multiplication():
    rng = random.Random(4)
    k = QuadExtField(7)
    A, B = _tm(k, rng, 3, 3, 0), _tm(k, rng, 3, 3, 0)
    assert (A @ B).rows() == linalg.mat_mul(A.rows(), B.rows(), k)


def test_frobenius_twist_is_multiplicative_and_keeps_rank():
    rng = random.Random(5)
    k = QuadExtField(3)
    for _ in range(20):
        A, B = _tm(k, rng, 2, 3, 0), _tm(k, rng, 3, 2, 0)
        lhs = frobenius_twist(A @ B)
        assert lhs.twist == 1
        assert lhs.rows() == linalg.mat_mul(frobenius_twist(A).rows(), frobenius_twist(B).rows(), k)
        assert frobenius_twist(A).rank() == A.rank()
        # frobenius twice is the identity on F_{p^2}
        assert frobenius_twist(frobenius_twist(A)).matrix == A.matrix


def test_frobenius_twist_examples():
    k = QuadExtField(3)  # x^2 = 2 = -1, so x is i
    i = k.gen
    assert frobenius_twist(TwistedMap(k, [[i]])).matrix == ((-i,),)
    assert frobenius_twist(TwistedMap.identity(k, 3)).matrix == TwistedMap.identity(k, 3).matrix
    prime = TwistedMap.from_rows(k, [[1, 2], [0, 1]])
    assert frobenius_twist(prime).matrix == prime.matrix
    assert compose(TwistedMap.identity(k, 2, 1), TwistedMap.identity(k, 2, 1)) == TwistedMap.identity(k, 2, 2)


def test_empty_maps_keep_their_shape():
    k = QuadExtField(5)
    A = TwistedMap(k, (), 1, ncols=3)
    assert A.shape == (0, 3)
    # 2x0 after 0x3: the zero map with three columns
    Z = compose(TwistedMap(k, [[], []], 1), A)
    assert Z.shape == (2, 3) and Z.twist == 2
    assert linalg.is_zero(Z.rows())


def test_compose_dimension_mismatch():
    k = QuadExtField(3)
    with pytest.raises(ValueError):
        compose(TwistedMap.identity(k, 2), TwistedMap.identity(k, 3))


def test_ragged_matrix_rejected():
    k = QuadExtField(3)
    with pytest.raises(ValueError):
        TwistedMap(k, [[k.one], [k.one, k.zero]])
