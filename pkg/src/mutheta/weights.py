"""
Weights for GL_m x GL_m x GL_{n-m} and representations on trivialized bundles.

A ``RepExpression`` is a small formal tree (Sym^d, wedge^r, tensor, dual,
Frobenius twist) over the standard representations ``st_Q``, ``st_Pmu`` and
``st_P0``.  ``dimension`` and ``action`` evaluate it; ``action`` is a group
homomorphism for every node.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from math import comb, prod

from . import linalg

GENERATORS = ("st_Q", "st_Pmu", "st_P0")


# dominant weights -------------------------------------------------------------------


def check_dominant(lam) -> tuple:
    lam = tuple(int(x) for x in lam)
    if any(a < b for a, b in zip(lam, lam[1:])):
        raise ValueError(f"{lam} is not dominant (must be weakly decreasing)")
    return lam


@dataclass(frozen=True)
class DominantWeight:
    lam: tuple

    def __post_init__(self):
        object.__setattr__(self, "lam", check_dominant(self.lam))

    def __len__(self):
        return len(self.lam)

    def __add__(self, other: "DominantWeight") -> "DominantWeight":
        if len(self) != len(other):
            raise ValueError("weights of different sizes")
        return DominantWeight(tuple(a + b for a, b in zip(self.lam, other.lam)))


@dataclass(frozen=True)
class WeightTriple:
    a: DominantWeight
    b: DominantWeight
    c: DominantWeight

    @classmethod
    def of(cls, a, b, c=()) -> "WeightTriple":
        return cls(DominantWeight(tuple(a)), DominantWeight(tuple(b)), DominantWeight(tuple(c)))

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("the first two components must have the same size m")

    def __add__(self, other: "WeightTriple") -> "WeightTriple":
        return WeightTriple(self.a + other.a, self.b + other.b, self.c + other.c)

    def as_lists(self) -> list:
        return [list(self.a.lam), list(self.b.lam), list(self.c.lam)]

    def __str__(self):
        return "/".join(",".join(str(x) for x in w.lam) for w in (self.a, self.b, self.c))


def parse_kappa(text: str) -> WeightTriple:
    """'a1,a2/b1,b2/c1,...' (the c part may be empty or absent)."""
    parts = text.strip().split("/")
    if len(parts) not in (2, 3):
        raise ValueError(f"weight must look like 'a1,a2/b1,b2/c...', got {text!r}")
    vals = [tuple(int(x) for x in s.split(",") if x.strip()) for s in parts]
    while len(vals) < 3:
        vals.append(())
    return WeightTriple.of(*vals)


# expressions ----------------------------------------------------------------------------


class RepExpression:
    def dimension(self, ranks: dict) -> int:
        raise NotImplementedError

    def action(self, mats: dict, ring) -> list:
        raise NotImplementedError

    def __mul__(self, other):
        return Tensor(self, other)


@dataclass(frozen=True)
class Gen(RepExpression):
    name: str

    def __post_init__(self):
        if self.name not in GENERATORS:
            raise ValueError(f"unknown generator {self.name!r}; use one of {GENERATORS}")

    def dimension(self, ranks):
        return ranks[self.name]

    def action(self, mats, ring):
        g = mats[self.name]
        if len(g) and any(len(r) != len(g) for r in g):
            raise ValueError(f"matrix for {self.name} is not square")
        return [list(r) for r in g]

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Trivial(RepExpression):
    def dimension(self, ranks):
        return 1

    def action(self, mats, ring):
        return [[ring.one]]

    def __str__(self):
        return "1"


@dataclass(frozen=True)
class Sym(RepExpression):
    d: int
    arg: RepExpression

    def __post_init__(self):
        if self.d < 0:
            raise ValueError("Sym degree must be >= 0")

    def dimension(self, ranks):
        r = self.arg.dimension(ranks)
        return comb(r + self.d - 1, self.d)

    def action(self, mats, ring):
        return sym_power_matrix(self.arg.action(mats, ring), self.d, ring)

    def __str__(self):
        return f"Sym^{self.d}({self.arg})"


@dataclass(frozen=True)
class Wedge(RepExpression):
    r: int
    arg: RepExpression

    def __post_init__(self):
        if self.r < 0:
            raise ValueError("wedge degree must be >= 0")

    def dimension(self, ranks):
        n = self.arg.dimension(ranks)
        if self.r > n:
            raise ValueError(f"wedge^{self.r} of a rank-{n} module")
        return comb(n, self.r)

    def action(self, mats, ring):
        g = self.arg.action(mats, ring)
        if self.r > len(g):
            raise ValueError(f"wedge^{self.r} of a rank-{len(g)} module")
        return wedge_power_matrix(g, self.r, ring)

    def __str__(self):
        return f"wedge^{self.r}({self.arg})"


@dataclass(frozen=True)
class Tensor(RepExpression):
    left: RepExpression
    right: RepExpression

    def dimension(self, ranks):
        return self.left.dimension(ranks) * self.right.dimension(ranks)

    def action(self, mats, ring):
        return linalg.kron(self.left.action(mats, ring), self.right.action(mats, ring))

    def __str__(self):
        return f"{self.left} (x) {self.right}"


@dataclass(frozen=True)
class Dual(RepExpression):
    arg: RepExpression

    def dimension(self, ranks):
        return self.arg.dimension(ranks)

    def action(self, mats, ring):
        g = self.arg.action(mats, ring)
        return linalg.transpose(linalg.inverse(g, ring))

    def __str__(self):
        return f"({self.arg})^v"


@dataclass(frozen=True)
class FrobTwist(RepExpression):
    arg: RepExpression

    def dimension(self, ranks):
        return self.arg.dimension(ranks)

    def action(self, mats, ring):
        return linalg.mat_frobenius(self.arg.action(mats, ring))

    def __str__(self):
        return f"({self.arg})^(p)"


def evaluate(expr: RepExpression, ranks: dict, mats: dict | None = None, ring=None) -> dict:
    """Dimension of ``expr`` and, if matrices are supplied, its action matrix."""
    for name, g in (mats or {}).items():
        if name in ranks and len(g) != ranks[name]:
            raise ValueError(f"{name} has rank {ranks[name]} but a {len(g)}x{len(g)} matrix was given")
    out = {"dim": expr.dimension(ranks)}
    if mats is not None:
        out["action"] = expr.action(mats, ring)
    return out


# actions on Sym and wedge --------------------------------------------------------------


def sym_monomials(r: int, d: int) -> list[tuple]:
    return list(combinations_with_replacement(range(r), d))


def sym_power_matrix(g: list, d: int, ring) -> list:
    """Action on Sym^d, basis = monomials x_{j1}...x_{jd} (j1 <= ... <= jd).

    g sends x_j to sum_i g[i][j] x_i.
    """
    r = len(g)
    basis = sym_monomials(r, d)
    index = {mono: i for i, mono in enumerate(basis)}
    M = linalg.zeros(ring, len(basis), len(basis))
    for col, mono in enumerate(basis):
        poly = {(): ring.one}
        for j in mono:
            new = {}
            for m0, c in poly.items():
                for i in range(r):
                    if not g[i][j]:
                        continue
                    key = tuple(sorted(m0 + (i,)))
                    new[key] = new.get(key, ring.zero) + c * g[i][j]
            poly = new
        for mono2, c in poly.items():
            M[index[mono2]][col] = M[index[mono2]][col] + c
    return M


def wedge_power_matrix(g: list, r: int, ring) -> list:
    """Action on wedge^r: entry (I, J) is the minor det g[I, J]."""
    n = len(g)
    basis = list(combinations(range(n), r))
    return [
        [linalg.det([[g[i][j] for j in J] for i in I], ring) for J in basis] for I in basis
    ]


# rho_lambda -----------------------------------------------------------------------------


def rho_lambda_expr(lam, gen: str = "st_Q") -> RepExpression:
    """Sym^{l1-l2}(st) (x) Sym^{l2-l3}(wedge^2 st) (x) ... (x) Sym^{lm}(wedge^m st).

    Factors with exponent 0 are left out.  A negative last entry is read as a
    power of the dual determinant.
    """
    lam = check_dominant(lam)
    m = len(lam)
    if m == 0:
        return Trivial()
    st = Gen(gen)
    factors = []
    for i in range(1, m):
        e = lam[i - 1] - lam[i]
        if e:
            factors.append(Sym(e, st if i == 1 else Wedge(i, st)))
    last = lam[-1]
    top = st if m == 1 else Wedge(m, st)
    if last > 0:
        factors.append(Sym(last, top))
    elif last < 0:
        factors.append(Sym(-last, Dual(top)))
    if not factors:
        return Trivial()
    expr = factors[0]
    for f in factors[1:]:
        expr = Tensor(expr, f)
    return expr


def rho_lambda_dim(lam) -> int:
    """prod_i C(C(m,i) + d_i - 1, d_i) with d_i the Sym exponents."""
    lam = check_dominant(lam)
    m = len(lam)
    ds = [lam[i - 1] - lam[i] for i in range(1, m)] + ([abs(lam[-1])] if m else [])
    return prod(comb(comb(m, i) + d - 1, d) for i, d in enumerate(ds, start=1))


# sum-symmetric weights and D_kappa^kappa' ------------------------------------------------


def is_sum_symmetric(kp: WeightTriple) -> bool:
    """kappa' = (a', b', 0) with a', b' >= 0; true iff sum a' = sum b'."""
    if any(kp.c.lam):
        raise ValueError("kappa' must have trivial third component")
    if any(x < 0 for x in kp.a.lam + kp.b.lam):
        raise ValueError("kappa' must have nonnegative entries")
    return sum(kp.a.lam) == sum(kp.b.lam)


def theta_count(kp: WeightTriple) -> int:
    """Number e of theta applications needed for D_kappa^kappa'."""
    is_sum_symmetric(kp)
    return sum(kp.a.lam)


def dk_target(kappa: WeightTriple, kp: WeightTriple) -> WeightTriple:
    if not is_sum_symmetric(kp):
        raise ValueError("kappa' is not sum-symmetric")
    if not len(kp.c):
        kp = WeightTriple(kp.a, kp.b, DominantWeight((0,) * len(kappa.c)))
    return kappa + kp


def scalar_shift(k: int, kprime: int, p: int) -> int:
    """Parallel weight k raised by kappa' = (k',...,k'; k',...,k') in characteristic p.

    The b' part is Frobenius twisted, so it contributes p*k' on top of k'.
    """
    return k + kprime + p * kprime


@dataclass(frozen=True)
class WeightTag:
    """Formal weight: scalar weight k tensored with theta_count copies of st_Pmu (x) st_Q."""

    k: int | None = None
    theta: int = 0

    def __str__(self):
        base = "1" if self.k is None else f"L^{self.k}"
        return base + "".join(" (x) (st_Pmu (x) st_Q)" for _ in range(self.theta))


def theta_weight_tag(tag: WeightTag | None) -> WeightTag:
    tag = tag or WeightTag()
    return WeightTag(tag.k, tag.theta + 1)


def dk_report(kappa: WeightTriple, kp: WeightTriple, p: int) -> dict:
    sym = is_sum_symmetric(kp)
    out = {
        "kappa": str(kappa),
        "kappa_prime": str(kp),
        "sum_symmetric": sym,
        "theta_applications": sum(kp.a.lam),
    }
    if sym:
        out["target"] = str(dk_target(kappa, kp))
        # parallel weights: kappa = (k..k / 0 / 0), kappa' = (k'..k' / k'..k' / 0)
        ka, kpa = set(kappa.a.lam), set(kp.a.lam)
        parallel = len(ka) == 1 and len(kpa) == 1 and set(kp.b.lam) == kpa
        if parallel and not any(kappa.b.lam + kappa.c.lam):
            out["scalar_target"] = scalar_shift(ka.pop(), kpa.pop(), p)
    return out


# Galois embeddings -------------------------------------------------------------------------


def _square_invertible(g, ring, label):
    if any(len(r) != len(g) for r in g):
        raise ValueError(f"{label} must be square")
    try:
        return linalg.inverse(g, ring)
    except ZeroDivisionError:
        raise ValueError(f"{label} is singular") from None


def iota(g2: list, g1: list, ring) -> tuple:
    """(bar g2, g2, g1)."""
    _square_invertible(g2, ring, "gamma_2")
    if g1:
        _square_invertible(g1, ring, "gamma_1")
    return linalg.mat_frobenius(g2), [list(r) for r in g2], [list(r) for r in g1]


def iota_dual(g: list, ring, rest: int = 0) -> tuple:
    """(t(bar g)^{-1}, t g^{-1}, 1)."""
    inv = _square_invertible(g, ring, "gamma")
    tinv = linalg.transpose(inv)
    return linalg.mat_frobenius(tinv), tinv, linalg.identity(ring, rest)


def rho_iota_dual_on_index(g: list, ring) -> list:
    """rho(iota^v(g)) on st_Q (x) st_Pmu: kron(t(bar g)^{-1}, t g^{-1})."""
    a, b, _ = iota_dual(g, ring)
    return linalg.kron(a, b)


def random_invertible(ring, m: int, rng) -> list:
    while True:
        g = [[ring.random_element(rng) for _ in range(m)] for _ in range(m)]
        if linalg.det(g, ring).is_unit():
            return g
