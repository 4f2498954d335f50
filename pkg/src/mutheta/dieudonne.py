"""
Polarized Dieudonne spaces over F_{p^2} with an O_E-action.

Conventions (b_0..b_{2g-1} is the basis):

* ``F[i][j]`` is the coefficient of b_i in F(b_j^{(p)});
* ``V[i][j]`` is the coefficient of b_i^{(p)} in V(b_j);
* ``pairing[i][j]`` is <b_i, b_j>, a skew form;
* every basis vector has a type, ``"Sigma"`` or ``"SigmaBar"``.  F, V and the
  pairing only ever connect vectors of opposite type.

The Hodge filtration omega, the signature, P_0 and the Hasse data are always
derived from F and V, never stored.

The model constructors take V and the pairing as primary data and solve
<Fx, y> = <x, Vy>^{(p)} for F.  With a skew pairing this fixes the signs of
F uniquely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import linalg
from .exactring import QuadExtField, check_prime
from .semilinear import TwistedMap, compose

SIGMA = "Sigma"
SIGMA_BAR = "SigmaBar"
TYPES = (SIGMA, SIGMA_BAR)


@dataclass(frozen=True)
class DieudonneSpace:
    base: QuadExtField
    names: tuple
    types: tuple
    F: TwistedMap
    V: TwistedMap
    pairing: tuple  # row tuples

    def __post_init__(self):
        n = len(self.names)
        if len(set(self.names)) != n:
            raise ValueError("basis names must be distinct")
        if len(self.types) != n or any(t not in TYPES for t in self.types):
            raise ValueError(f"types must be {TYPES}, one per basis vector")
        for label, M in (("F", self.F.matrix), ("V", self.V.matrix), ("pairing", self.pairing)):
            if len(M) != n or any(len(r) != n for r in M):
                raise ValueError(f"{label} must be {n}x{n}")
        object.__setattr__(self, "pairing", tuple(tuple(r) for r in self.pairing))

    @classmethod
    def from_matrices(cls, base, names, types, F, V, pairing) -> "DieudonneSpace":
        lift = lambda M: tuple(tuple(base(x) for x in row) for row in M)  # noqa: E731
        return cls(
            base,
            tuple(names),
            tuple(types),
            TwistedMap(base, lift(F), 1),
            TwistedMap(base, lift(V), 1),
            lift(pairing),
        )

    # basic data -----------------------------------------------------------

    @property
    def p(self) -> int:
        return self.base.p

    @property
    def dim(self) -> int:
        return len(self.names)

    @property
    def g(self) -> int:
        return self.dim // 2

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"no basis vector called {name!r}") from None

    def vector(self, name: str) -> list:
        v = [self.base.zero] * self.dim
        v[self.index(name)] = self.base.one
        return v

    def F_rows(self) -> list:
        return self.F.rows()

    def V_rows(self) -> list:
        return self.V.rows()

    def P_rows(self) -> list:
        return [list(r) for r in self.pairing]

    def pair(self, x: list, y: list, ring=None):
        ring = ring or self.base
        acc = ring.zero
        for i, xi in enumerate(x):
            if not xi:
                continue
            for j, yj in enumerate(y):
                c = self.pairing[i][j]
                if c and yj:
                    acc = acc + xi * yj * c
        return acc

    def type_of(self, v: list) -> str | None:
        """Sigma / SigmaBar if v is pure, else None (zero counts as pure Sigma)."""
        seen = {self.types[i] for i, x in enumerate(v) if x}
        if not seen:
            return SIGMA
        return seen.pop() if len(seen) == 1 else None

    # derived data -----------------------------------------------------------

    def omega(self) -> list[list]:
        """Basis of omega = (ker F on D^{(p)}) untwisted, in D coordinates."""
        ker = linalg.nullspace(self.F_rows(), self.base)
        return [[x.frobenius() for x in v] for v in ker]

    def omega_split(self) -> tuple[list, list]:
        """(omega(Sigma), omega(SigmaBar)) bases."""
        sig, bar = [], []
        for v in self.omega():
            t = self.type_of(v)
            if t is None:
                raise ValueError("omega is not O_E-stable")
            (sig if t == SIGMA else bar).append(v)
        return sig, bar

    def signature(self) -> tuple[int, int]:
        sig, bar = self.omega_split()
        return len(sig), len(bar)

    def omega_names(self) -> list[str] | None:
        """Names of the basis vectors spanning omega, if omega is a coordinate subspace."""
        return _coordinate_names(self, self.omega())

    def P0(self) -> list[list]:
        """omega(Sigma) intersected with ker V."""
        sig, _ = self.omega_split()
        if not sig:
            return []
        # coefficients c with V(sum c_k sig_k) = 0
        Vs = [linalg.mat_vec(self.V_rows(), v, self.base) for v in sig]
        M = linalg.transpose(Vs)
        out = []
        for c in linalg.nullspace(M, self.base):
            vec = [self.base.zero] * self.dim
            for ck, v in zip(c, sig):
                vec = [a + ck * b for a, b in zip(vec, v)]
            out.append(vec)
        return out

    def P0_names(self) -> list[str] | None:
        return _coordinate_names(self, self.P0())

    def hodge_bases(self) -> tuple[list, list]:
        """Bases of P = omega(Sigma) and Q = omega(SigmaBar) in basis order."""
        return self.omega_split()

    def hasse_data(self) -> dict:
        P, Q = self.hodge_bases()
        return hasse_from_generators(self, P, Q, self.base)

    def hasse_matrix(self) -> TwistedMap:
        return self.hasse_data()["H"]

    def hasse_invariant(self):
        return self.hasse_matrix().det()

    def hQ(self):
        return self.hasse_data()["V_Q"].det()

    def hP(self):
        return self.hasse_data()["V_P"].det()

    def is_verified(self) -> bool:
        return verify(self).ok

    def rename(self, mapping) -> "DieudonneSpace":
        """Rename basis vectors; ``mapping`` is a dict or a callable."""
        f = mapping if callable(mapping) else (lambda s: mapping.get(s, s))
        return DieudonneSpace(
            self.base, tuple(f(s) for s in self.names), self.types, self.F, self.V, self.pairing
        )

    def describe(self) -> dict:
        sig = self.signature()
        return {
            "dim": self.dim,
            "signature": list(sig),
            "omega": self.omega_names(),
            "P0": self.P0_names(),
            "hasse_matrix": [[str(x) for x in r] for r in self.hasse_matrix().matrix],
            "hasse_invariant": str(self.hasse_invariant()),
            "hasse_is_unit": self.hasse_invariant().is_unit() if sig[1] else True,
        }


def _coordinate_names(D: DieudonneSpace, vecs: list[list]) -> list[str] | None:
    names = []
    for v in vecs:
        supp = [i for i, x in enumerate(v) if x]
        if len(supp) != 1:
            return None
        names.append(D.names[supp[0]])
    return sorted(names, key=D.names.index)


# Hasse matrices ---------------------------------------------------------------


def _V_in_span(D: DieudonneSpace, sources: list, targets: list, ring) -> TwistedMap:
    """Matrix of V on ``sources`` in the twisted ``targets`` (twist 1)."""
    Vr = linalg.mat_map(ring, D.V_rows()) if ring is not D.base else D.V_rows()
    tw = [[x.frobenius() for x in t] for t in targets]
    cols = [linalg.solve_in_span(tw, linalg.mat_vec(Vr, s, ring), ring) for s in sources]
    rows = [[c[i] for c in cols] for i in range(len(targets))]
    return TwistedMap(ring, rows, 1, len(sources))


def hasse_from_generators(D: DieudonneSpace, P: list, Q: list, ring) -> dict:
    """V_Q : Q -> P^{(p)}, V_P : P -> Q^{(p)} and H = V_P^{(p)} o V_Q.

    P, Q are lists of coordinate vectors over ``ring`` (the base field or a
    square-zero ring over it).
    """
    VQ = _V_in_span(D, Q, P, ring)
    VP = _V_in_span(D, P, Q, ring)
    H = compose(VP, VQ)
    return {"V_Q": VQ, "V_P": VP, "H": H}


# verification ------------------------------------------------------------------


@dataclass
class VerifyReport:
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    @property
    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def __bool__(self):
        return self.ok

    def as_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "failed": self.failures}


AXIOMS = (
    "dim even, rank F = rank V = g",
    "Im F = ker V",
    "Im V = ker F",
    "<Fx,y> = <x,Vy>^(p)",
    "O_E-equivariance",
    "pairing skew and nondegenerate",
    "omega isotropic of dim g",
)


def verify(D: DieudonneSpace) -> VerifyReport:
    k = D.base
    F, V, P = D.F_rows(), D.V_rows(), D.P_rows()
    n = D.dim
    g = n // 2
    rep = VerifyReport()
    rep.checks[AXIOMS[0]] = n % 2 == 0 and linalg.rank(F) == g and linalg.rank(V) == g

    imF = linalg.column_space_basis(F)
    imV = linalg.column_space_basis(V)
    rep.checks[AXIOMS[1]] = linalg.same_span(imF, linalg.nullspace(V, k))
    rep.checks[AXIOMS[2]] = linalg.same_span(imV, linalg.nullspace(F, k))

    # <F b_j^(p), b_k> = (F^T P)[j][k];  <b_j^(p), V b_k> = (frob(P) V)[j][k]
    lhs = linalg.mat_mul(linalg.transpose(F), P, k)
    rhs = linalg.mat_mul(linalg.mat_frobenius(P), V, k)
    rep.checks[AXIOMS[3]] = lhs == rhs

    equi = True
    for M in (F, V, P):
        for i in range(n):
            for j in range(n):
                if M[i][j] and D.types[i] == D.types[j]:
                    equi = False
    rep.checks[AXIOMS[4]] = equi

    skew = all(P[i][j] == -P[j][i] for i in range(n) for j in range(n))
    rep.checks[AXIOMS[5]] = skew and linalg.det(P, k).is_unit()

    om = D.omega()
    iso = all(not D.pair(x, y) for x in om for y in om)
    rep.checks[AXIOMS[6]] = iso and len(om) == g
    return rep


# constructors ----------------------------------------------------------------------


def _from_V_and_pairing(p, names, types, V_map, pairs) -> DieudonneSpace:
    """Build a space from V (source name -> target name) and pairing values.

    ``pairs`` lists (x, y, c) meaning <x, y> = c; skew-symmetry fills in the
    rest.  F is solved from the compatibility with the pairing.
    """
    k = QuadExtField(check_prime(p))
    n = len(names)
    idx = {s: i for i, s in enumerate(names)}
    V = linalg.zeros(k, n, n)
    for src, tgt in V_map.items():
        V[idx[tgt]][idx[src]] = k.one
    P = linalg.zeros(k, n, n)
    for x, y, c in pairs:
        P[idx[x]][idx[y]] = k(c)
        P[idx[y]][idx[x]] = k(-c)
    # F^T P = frob(P) V  =>  F = (frob(P) V P^{-1})^T
    Pinv = linalg.inverse(P, k)
    Ft = linalg.mat_mul(linalg.mat_mul(linalg.mat_frobenius(P), V, k), Pinv, k)
    F = linalg.transpose(Ft)
    return DieudonneSpace(
        k, tuple(names), tuple(types), TwistedMap(k, F, 1), TwistedMap(k, V, 1), P
    )


def _types(names) -> list[str]:
    return [SIGMA if s.startswith("e") else SIGMA_BAR for s in names]


def g_sigma(p: int, suffix: str = "1") -> DieudonneSpace:
    """2-dim space of signature (1,0): <e,f> = 1, V f = e, omega = k e."""
    e, f = f"e{suffix}", f"f{suffix}"
    return _from_V_and_pairing(p, [e, f], [SIGMA, SIGMA_BAR], {f: e}, [(e, f, 1)])


def g_sigma_bar(p: int, suffix: str = "2") -> DieudonneSpace:
    """2-dim space of signature (0,1): <f,e> = 1, V e = f, omega = k f."""
    e, f = f"e{suffix}", f"f{suffix}"
    return _from_V_and_pairing(p, [e, f], [SIGMA, SIGMA_BAR], {e: f}, [(f, e, 1)])


def hyperbolic_mu_et(p: int, i: int | str = 1) -> DieudonneSpace:
    """Multiplicative plus etale plane, signature (1,1)."""
    names = [f"e_mu{i}", f"e_et{i}", f"f_mu{i}", f"f_et{i}"]
    em, ee, fm, fe = names
    return _from_V_and_pairing(
        p, names, _types(names), {em: fm, fm: em}, [(em, fe, 1), (fm, ee, 1)]
    )


def ao21(p: int) -> DieudonneSpace:
    names = ["e1", "e2", "e3", "f1", "f2", "f3"]
    return _from_V_and_pairing(
        p,
        names,
        _types(names),
        {"e3": "f2", "f2": "e1", "f3": "e3"},
        [("e1", "f3", 1), ("f2", "e2", 1), ("f1", "e3", 1)],
    )


def ao31(p: int) -> DieudonneSpace:
    names = ["e1", "e2", "e3", "e4", "f1", "f2", "f3", "f4"]
    return _from_V_and_pairing(
        p,
        names,
        _types(names),
        {"e4": "f3", "f2": "e1", "f3": "e3", "f4": "e4"},
        [("e1", "f4", 1), ("e2", "f3", 1), ("f2", "e3", 1), ("f1", "e4", 1)],
    )


def direct_sum(*spaces: DieudonneSpace) -> DieudonneSpace:
    if not spaces:
        raise ValueError("direct_sum needs at least one summand")
    k = spaces[0].base
    if any(D.base != k for D in spaces):
        raise ValueError("summands live over different base fields")
    names = [s for D in spaces for s in D.names]
    if len(set(names)) != len(names):
        raise ValueError("basis names collide; rename a summand first")
    n = len(names)

    def block(get):
        M = linalg.zeros(k, n, n)
        off = 0
        for D in spaces:
            for i, row in enumerate(get(D)):
                for j, x in enumerate(row):
                    M[off + i][off + j] = x
            off += D.dim
        return M

    return DieudonneSpace(
        k,
        tuple(names),
        tuple(t for D in spaces for t in D.types),
        TwistedMap(k, block(DieudonneSpace.F_rows), 1),
        TwistedMap(k, block(DieudonneSpace.V_rows), 1),
        block(DieudonneSpace.P_rows),
    )


def _check_signature(n: int, m: int):
    for x in (n, m):
        if not isinstance(x, int) or isinstance(x, bool):
            raise ValueError(f"signature entries must be integers, got {x!r}")


def mu_ordinary(n: int, m: int, p: int) -> DieudonneSpace:
    """m hyperbolic planes plus n-m copies of g_sigma."""
    _check_signature(n, m)
    if not (0 <= m <= n) or n == 0:
        raise ValueError(f"invalid signature ({n},{m}) for a mu-ordinary space")
    parts = [hyperbolic_mu_et(p, i) for i in range(1, m + 1)]
    parts += [g_sigma(p, f"_sharp{j}") for j in range(1, n - m + 1)]
    return direct_sum(*parts)


def ao_space(n: int, m: int, p: int) -> DieudonneSpace:
    """The Dieudonne space at an almost-ordinary point of signature (n,m)."""
    _check_signature(n, m)
    if m < 1 or n < m:
        raise ValueError(f"no almost-ordinary model for signature ({n},{m})")
    hyp = [hyperbolic_mu_et(p, i) for i in range(1, m)]
    if n == m + 1:
        return direct_sum(ao21(p), *hyp)
    if n >= m + 2:
        sharp = [g_sigma(p, f"_sharp{j}") for j in range(1, n - m - 1)]
        return direct_sum(ao31(p), *hyp, *sharp)
    return direct_sum(g_sigma(p, "_sharp"), g_sigma_bar(p, "_flat"), *hyp)


MODELS = {
    "g_sigma": lambda p, n=None, m=None: g_sigma(p),
    "g_sigma_bar": lambda p, n=None, m=None: g_sigma_bar(p),
    "hyperbolic": lambda p, n=None, m=None: hyperbolic_mu_et(p),
    "ao21": lambda p, n=None, m=None: ao21(p),
    "ao31": lambda p, n=None, m=None: ao31(p),
    "mu_ordinary": lambda p, n, m: mu_ordinary(n, m, p),
    "ao_space": lambda p, n, m: ao_space(n, m, p),
}
