"""
Fourier-Jacobi expansions at a rank-m cusp.

Indices are integer hermitian m x m matrices over the order O = Z[sqrt(-58)]
(entries are pairs (x, y) meaning x + y*sqrt(-58)).  58 is chosen because
-58 is a non-square modulo every prime 3 <= p <= 23, so O/p is F_{p^2}
for the primes used in practice.  For m = 1 an index is just an
integer.

An expansion is a finitely supported map from the positive cone to
coefficient vectors over W_s.  Applying theta replaces a(h) by
a(h) (x) (h mod p^s), which multiplies the coefficient rank by m^2.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations, permutations
from math import isqrt

from . import linalg
from .exactring import TruncWittRing
from .weights import WeightTag, theta_weight_tag

D_ORDER = 58


# the order O = Z[sqrt(-D)] ----------------------------------------------------------------


def omul(z, w):
    return (z[0] * w[0] - D_ORDER * z[1] * w[1], z[0] * w[1] + z[1] * w[0])


def oadd(z, w):
    return (z[0] + w[0], z[1] + w[1])


def oneg(z):
    return (-z[0], -z[1])


def oconj(z):
    return (z[0], -z[1])


def onorm(z) -> int:
    return z[0] * z[0] + D_ORDER * z[1] * z[1]


def _as_o(z):
    if isinstance(z, int):
        return (z, 0)
    x, y = z
    return (int(x), int(y))


def odet(M) -> tuple:
    """Determinant over O by the Leibniz formula (m is small)."""
    n = len(M)
    total = (0, 0)
    for perm in permutations(range(n)):
        inv = sum(1 for i, j in combinations(range(n), 2) if perm[i] > perm[j])
        term = (1, 0)
        for i in range(n):
            term = omul(term, M[i][perm[i]])
        total = oadd(total, term if inv % 2 == 0 else oneg(term))
    return total


def omatmul(A, B):
    n, k, c = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(c):
            acc = (0, 0)
            for t in range(k):
                acc = oadd(acc, omul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def oconj_transpose(A):
    return [[oconj(A[j][i]) for j in range(len(A))] for i in range(len(A[0]))]


def otranspose(A):
    return [[A[j][i] for j in range(len(A))] for i in range(len(A[0]))]


def oinverse(g) -> list:
    """Inverse in GL_m(O); requires det = +-1 (the units of O)."""
    g = [[_as_o(z) for z in row] for row in g]
    m = len(g)
    if any(len(r) != m for r in g):
        raise ValueError("gamma must be square")
    det = odet(g)
    if det not in ((1, 0), (-1, 0)):
        raise ValueError(f"gamma is not invertible over O (det = {det})")
    s = det[0]
    adj = [[(0, 0)] * m for _ in range(m)]
    for i in range(m):
        for j in range(m):
            minor = [[g[a][b] for b in range(m) if b != j] for a in range(m) if a != i]
            c = odet(minor) if minor else (1, 0)
            if (i + j) % 2:
                c = oneg(c)
            adj[j][i] = (c[0] * s, c[1] * s)
    return adj


def to_ring(z, ring: TruncWittRing):
    x, y = _as_o(z)
    if y % ring.q == 0:
        return ring(x)
    return ring(x) + ring(y) * ring.sqrt_neg(D_ORDER)


# indices ------------------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class HermIndex:
    m: int
    entries: tuple  # rows of (x, y) pairs

    def __post_init__(self):
        rows = tuple(tuple(_as_o(z) for z in row) for row in self.entries)
        if len(rows) != self.m or any(len(r) != self.m for r in rows):
            raise ValueError(f"index must be {self.m}x{self.m}")
        for i in range(self.m):
            for j in range(self.m):
                if rows[j][i] != oconj(rows[i][j]):
                    raise ValueError("index is not hermitian")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def scalar(cls, n: int) -> "HermIndex":
        return cls(1, (((int(n), 0),),))

    @classmethod
    def of(cls, rows) -> "HermIndex":
        if isinstance(rows, int):
            return cls.scalar(rows)
        return cls(len(rows), tuple(tuple(_as_o(z) for z in r) for r in rows))

    @classmethod
    def zero(cls, m: int) -> "HermIndex":
        return cls(m, tuple(((0, 0),) * m for _ in range(m)))

    def __add__(self, other: "HermIndex") -> "HermIndex":
        if self.m != other.m:
            raise ValueError("indices of different sizes")
        return HermIndex(
            self.m,
            tuple(tuple(oadd(a, b) for a, b in zip(r, s)) for r, s in zip(self.entries, other.entries)),
        )

    def scale(self, c: int) -> "HermIndex":
        return HermIndex(self.m, tuple(tuple((c * x, c * y) for x, y in r) for r in self.entries))

    @property
    def trace(self) -> int:
        return sum(self.entries[i][i][0] for i in range(self.m))

    @property
    def n(self) -> int:
        """The integer index when m = 1."""
        if self.m != 1:
            raise ValueError("only m = 1 indices are integers")
        return self.entries[0][0][0]

    def principal_minors(self):
        for k in range(1, self.m + 1):
            for idx in combinations(range(self.m), k):
                yield idx, odet([[self.entries[i][j] for j in idx] for i in idx])[0]

    def divisible_by(self, p: int) -> bool:
        return all(x % p == 0 and y % p == 0 for r in self.entries for x, y in r)

    def act(self, g, ginv=None) -> "HermIndex":
        """h -> t(bar g)^{-1} h g^{-1}; a left action of GL_m(O)."""
        ginv = ginv or oinverse(g)
        A = oconj_transpose(ginv)
        return HermIndex(self.m, tuple(map(tuple, omatmul(omatmul(A, self.entries), ginv))))

    def vec(self, ring) -> list:
        """Row-major entries reduced into ``ring``."""
        return [to_ring(z, ring) for r in self.entries for z in r]

    def key(self) -> str:
        if self.m == 1:
            return str(self.n)
        return ",".join(f"{x}:{y}" for r in self.entries for x, y in r)

    @classmethod
    def from_key(cls, key: str, m: int) -> "HermIndex":
        if m == 1:
            return cls.scalar(int(key))
        vals = [tuple(int(t) for t in part.split(":")) for part in key.split(",")]
        if len(vals) != m * m or any(len(v) != 2 for v in vals):
            raise ValueError(f"bad index key {key!r} for m={m}")
        return cls(m, tuple(tuple(vals[i * m : (i + 1) * m]) for i in range(m)))

    def __str__(self):
        if self.m == 1:
            return str(self.n)
        fmt = lambda z: str(z[0]) if not z[1] else f"{z[0]}{z[1]:+d}w"  # noqa: E731
        return "[" + "; ".join(" ".join(fmt(z) for z in r) for r in self.entries) + "]"


def in_positive_cone(h: HermIndex) -> bool:
    """Positive semidefinite: every principal minor is >= 0.

    Minors of a hermitian matrix over O are rational integers, so this is an
    exact test.  Leading minors alone would not decide semidefiniteness.
    """
    return all(v >= 0 for _, v in h.principal_minors())


# expansions ----------------------------------------------------------------------------------


@dataclass(frozen=True)
class FJExpansion:
    ring: TruncWittRing
    m: int
    terms: dict = field(compare=True)  # HermIndex -> tuple of ring elements
    trunc: int | None = None
    weight: WeightTag | None = None
    base_rank: int = 1
    theta_count: int = 0

    def __post_init__(self):
        r = self.coeff_rank
        clean = {}
        for h, a in self.terms.items():
            if not isinstance(h, HermIndex):
                h = HermIndex.of(h)
            if h.m != self.m:
                raise ValueError(f"index {h} has size {h.m}, expected {self.m}")
            if not in_positive_cone(h):
                raise ValueError(f"index {h} is not positive semidefinite")
            if self.trunc is not None and h.trace > self.trunc:
                continue
            a = tuple(self.ring(x) if isinstance(x, int) else x for x in a)
            if len(a) != r:
                raise ValueError(f"coefficient at {h} has length {len(a)}, expected {r}")
            if any(a):
                clean[h] = a
        object.__setattr__(self, "terms", clean)

    @property
    def p(self) -> int:
        return self.ring.p

    @property
    def coeff_rank(self) -> int:
        return self.base_rank * self.m ** (2 * self.theta_count)

    def support(self) -> list:
        return sorted(self.terms)

    def coeff(self, h) -> tuple:
        h = h if isinstance(h, HermIndex) else HermIndex.of(h)
        return self.terms.get(h, (self.ring.zero,) * self.coeff_rank)

    def _like(self, terms, **kw) -> "FJExpansion":
        args = dict(
            ring=self.ring,
            m=self.m,
            terms=terms,
            trunc=self.trunc,
            weight=self.weight,
            base_rank=self.base_rank,
            theta_count=self.theta_count,
        )
        args.update(kw)
        return FJExpansion(**args)

    def same_terms(self, other: "FJExpansion") -> bool:
        return self.terms == other.terms

    def __add__(self, other: "FJExpansion") -> "FJExpansion":
        _compatible(self, other)
        out = dict(self.terms)
        for h, b in other.terms.items():
            a = out.get(h)
            out[h] = b if a is None else tuple(x + y for x, y in zip(a, b))
        return self._like(out, trunc=_min_trunc(self, other))

    def __neg__(self):
        return self._like({h: tuple(-x for x in a) for h, a in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FJExpansion":
        c = self.ring(c) if isinstance(c, int) else c
        return self._like({h: tuple(c * x for x in a) for h, a in self.terms.items()})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for h in self.support():
            a = self.terms[h]
            c = str(a[0]) if len(a) == 1 else "(" + ", ".join(map(str, a)) + ")"
            parts.append(f"{c} q^{h}")
        return " + ".join(parts)


def _min_trunc(f, g):
    ts = [t for t in (f.trunc, g.trunc) if t is not None]
    return min(ts) if ts else None


def _compatible(f, g):
    if f.ring != g.ring or f.m != g.m:
        raise ValueError("expansions over different rings or cusp ranks")
    if f.coeff_rank != g.coeff_rank:
        raise ValueError("coefficient ranks differ")


def expansion(p: int, coeffs: dict, m: int = 1, s: int = 1, trunc=None, weight=None) -> FJExpansion:
    """Scalar expansion from {index: coefficient}; coefficients are ints or [a, b] pairs."""
    ring = TruncWittRing(p, s)
    terms = {}
    for h, c in coeffs.items():
        val = ring(*c) if isinstance(c, (list, tuple)) else ring(c)
        terms[HermIndex.of(h)] = (val,)
    w = WeightTag(weight) if isinstance(weight, int) else weight
    return FJExpansion(ring, m, terms, trunc, w)


def theta(f: FJExpansion) -> FJExpansion:
    """a(h) -> a(h) (x) h."""
    terms = {}
    for h, a in f.terms.items():
        hv = h.vec(f.ring)
        terms[h] = tuple(x * y for x in a for y in hv)
    return f._like(terms, weight=theta_weight_tag(f.weight), theta_count=f.theta_count + 1)


def theta_iterate(f: FJExpansion, e: int) -> FJExpansion:
    if e < 0:
        raise ValueError("number of theta applications must be >= 0")
    for _ in range(e):
        f = theta(f)
    return f


def is_in_theta_kernel(f: FJExpansion) -> bool:
    """Support inside p times the cone."""
    return all(h.divisible_by(f.p) for h in f.terms)


def hasse_expansion(p: int, s: int = 1, m: int = 1, trunc=None) -> FJExpansion:
    ring = TruncWittRing(p, s)
    return FJExpansion(ring, m, {HermIndex.zero(m): (ring.one,)}, trunc, WeightTag(p * p - 1))


def hasse_mult(f: FJExpansion) -> FJExpansion:
    """Multiply by the Hasse invariant: same terms, scalar weight + (p^2 - 1)."""
    tag = f.weight or WeightTag(0)
    k = (tag.k or 0) + f.p * f.p - 1
    return f._like(dict(f.terms), weight=WeightTag(k, tag.theta))


def multiply(f: FJExpansion, g: FJExpansion) -> FJExpansion:
    """Cauchy product of two coefficient-rank-1 expansions, truncated."""
    if f.coeff_rank != 1 or g.coeff_rank != 1:
        raise ValueError("multiply needs coefficient rank 1")
    if f.ring != g.ring or f.m != g.m:
        raise ValueError("expansions over different rings or cusp ranks")
    N = _min_trunc(f, g)
    out = {}
    for h1, (a,) in f.terms.items():
        for h2, (b,) in g.terms.items():
            if N is not None and h1.trace + h2.trace > N:
                continue
            h = h1 + h2
            out[h] = out.get(h, f.ring.zero) + a * b
    weight = None
    if f.weight is not None and g.weight is not None:
        weight = WeightTag((f.weight.k or 0) + (g.weight.k or 0), f.weight.theta + g.weight.theta)
    return FJExpansion(f.ring, f.m, {h: (c,) for h, c in out.items()}, N, weight,
                       theta_count=f.theta_count + g.theta_count)


def coefficient_action(gamma, f: FJExpansion) -> list:
    """Matrix by which gamma acts on the coefficients of f."""
    ring = f.ring
    ginv = oinverse(gamma)
    A = [[to_ring(oconj(z), ring) for z in row] for row in otranspose(ginv)]
    B = [[to_ring(z, ring) for z in row] for row in otranspose(ginv)]
    T = linalg.kron(A, B)  # vec(A h g^{-1}) = (A (x) t g^{-1}) vec(h), row-major
    M = linalg.identity(ring, f.base_rank)
    for _ in range(f.theta_count):
        M = linalg.kron(M, T)
    return M


def gamma_act(gamma, f: FJExpansion) -> FJExpansion:
    """Index h -> t(bar g)^{-1} h g^{-1}; theta factors of the coefficients move the same way.

    The image of a trace-truncated expansion is no longer trace-truncated,
    so the result is an exact finite sum (trunc = None).
    """
    ginv = oinverse(gamma)
    M = coefficient_action(gamma, f) if f.theta_count else None
    out = {}
    for h, a in f.terms.items():
        b = tuple(linalg.mat_vec(M, list(a), f.ring)) if M else a
        out[h.act(gamma, ginv)] = b
    return f._like(out, trunc=None)


# random data ---------------------------------------------------------------------------------


def random_index(m: int, N: int, rng: random.Random) -> HermIndex:
    """A random element of the cone with trace <= N."""
    if m == 1:
        return HermIndex.scalar(rng.randint(0, N))
    diag = [0] * m
    budget = N
    for i in rng.sample(range(m), m):
        diag[i] = rng.randint(0, budget)
        budget -= diag[i]
    while True:
        rows = [[(0, 0)] * m for _ in range(m)]
        for i in range(m):
            rows[i][i] = (diag[i], 0)
        for i in range(m):
            for j in range(i + 1, m):
                bound = diag[i] * diag[j]
                ymax = isqrt(bound // D_ORDER)
                y = rng.randint(-ymax, ymax)
                xmax = isqrt(bound - D_ORDER * y * y)
                z = (rng.randint(-xmax, xmax), y)
                rows[i][j], rows[j][i] = z, oconj(z)
        h = HermIndex(m, tuple(map(tuple, rows)))
        if in_positive_cone(h):
            return h


def random_expansion(
    p: int,
    rng: random.Random,
    m: int = 1,
    s: int = 1,
    trunc: int = 100,
    size: int = 12,
    weight: int | None = None,
) -> FJExpansion:
    ring = TruncWittRing(p, s)
    terms = {random_index(m, trunc, rng): (ring.random_element(rng),) for _ in range(size)}
    return FJExpansion(ring, m, terms, trunc, WeightTag(weight) if weight is not None else None)


def random_gamma(m: int, rng: random.Random, steps: int = 4, bound: int = 3) -> list:
    """A random element of GL_m(O) with det +-1 (product of elementary moves)."""
    g = [[(1 if i == j else 0, 0) for j in range(m)] for i in range(m)]
    for _ in range(steps):
        kind = rng.random()
        if m > 1 and kind < 0.7:
            i, j = rng.sample(range(m), 2)
            c = (rng.randint(-bound, bound), rng.randint(-1, 1))
            # row_i += c * row_j
            g[i] = [oadd(a, omul(c, b)) for a, b in zip(g[i], g[j])]
        elif m > 1 and kind < 0.85:
            i, j = rng.sample(range(m), 2)
            g[i], g[j] = g[j], g[i]
        else:
            i = rng.randrange(m)
            g[i] = [oneg(a) for a in g[i]]
    return g


# theta cycles ----------------------------------------------------------------------------------


def cycle_report(k0: int, i0: int, p: int) -> dict:
    """Filtrations w_i of theta^i(f), i = 0..p-1, for f in the image of theta.

    Each step adds p+1, except step i0 -> i0+1 which drops by p^2 - p - 2.
    """
    if not (0 <= i0 < p - 1):
        raise ValueError(f"drop position must satisfy 0 <= i0 < p-1, got {i0}")
    ws = [k0]
    for i in range(p - 1):
        ws.append(ws[-1] + (p + 1 if i != i0 else -(p * p - p - 2)))
    return {"p": p, "k0": k0, "i0": i0, "weights": ws, **check_cycle(ws, k0, p)}


def check_cycle(weights: list, k0: int, p: int) -> dict:
    mod = p * p - 1
    congr = [(w - k0 - i * (p + 1)) % mod == 0 for i, w in enumerate(weights)]
    return {
        "closes": len(weights) == p and weights[0] == k0 and weights[-1] == k0,
        "congruences": all(congr),
        "bad_positions": [i for i, ok in enumerate(congr) if not ok],
    }


def closure_identity(p: int) -> int:
    """(p-2)(p+1) - (p^2 - p - 2); always 0."""
    return (p - 2) * (p + 1) - (p * p - p - 2)
