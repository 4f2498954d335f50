"""
First-order deformations of the Hodge filtration at an almost-ordinary point.

Work over R = k + m with m^2 = 0 and D = R (x) D_x, written in a horizontal
basis, so that Gauss-Manin of a generator is just the linear part of its
coordinates.  From a ``DeformedHodge`` we compute

* the Hasse family  V_Q, V_P and H = V_P^{(p)} V_Q  over R,
* the Kodaira-Spencer matrix  KS[(p,q), t] = <v_t(p), q|_x>,
* psi(eta): solve KS(xi) = eta in P (x) Q|_x, then push the P leg through
  P -> P/P_0 (n > m) or through V_P (n = m).
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .dieudonne import SIGMA, DieudonneSpace, ao_space, hasse_from_generators
from .exactring import OneForm, SquareZeroRing, SqZeroElement, d


def _pname(letter: str, *idx: int) -> str:
    sep = "_" if any(i >= 10 for i in idx) else ""
    return letter + sep.join(str(i) for i in idx)


@dataclass(frozen=True)
class DeformedHodge:
    space: DieudonneSpace
    ring: SquareZeroRing
    gens: dict  # name -> coordinate tuple over ring (name = the leading basis vector)
    P_order: tuple
    Q_order: tuple
    case: str = ""

    @property
    def n(self) -> int:
        return len(self.P_order)

    @property
    def m(self) -> int:
        return len(self.Q_order)

    @property
    def params(self) -> tuple:
        return self.ring.params

    def P_gens(self) -> list:
        return [list(self.gens[s]) for s in self.P_order]

    def Q_gens(self) -> list:
        return [list(self.gens[s]) for s in self.Q_order]

    def at_x(self, name: str) -> list:
        """The generator reduced at the closed point."""
        return [c.constant() for c in self.gens[name]]

    def generator_str(self, name: str) -> str:
        terms = []
        for b, c in zip(self.space.names, self.gens[name]):
            if not c:
                continue
            s = str(c)
            terms.append(b if s == "1" else f"({s}){b}")
        return " + ".join(terms)


def _gen(D: DieudonneSpace, R: SquareZeroRing, spec: dict) -> tuple:
    """Coordinates of sum_b spec[b] * b; values are ints, param names or (sign, name)."""
    v = [R.zero] * D.dim
    for b, coeff in spec.items():
        if isinstance(coeff, int):
            term = R(coeff)
        elif isinstance(coeff, str):
            term = R.t(coeff)
        else:
            sign, name = coeff
            term = R.t(name) * sign
        i = D.index(b)
        v[i] = v[i] + term
    return tuple(v)


def universal_ao_deformation(n: int, m: int, p: int) -> DeformedHodge:
    """The universal first-order deformation at an almost-ordinary point."""
    D = ao_space(n, m, p)
    hyp = range(1, m)
    if n == m + 1:
        return _case_one(D, m, hyp)
    if n >= m + 2:
        return _case_two(D, n, m, hyp)
    return _case_equal(D, m, hyp)


def _case_one(D, m, hyp) -> DeformedHodge:
    params = ["u", "v"]
    params += [_pname("u", i) for i in hyp] + [_pname("v", i) for i in hyp]
    params += [_pname("w", i) for i in hyp] + [_pname("w", i, j) for i in hyp for j in hyp]
    R = SquareZeroRing(D.base, params)
    g = {}
    g["e1"] = _gen(D, R, {"e1": 1, "e2": "u", **{f"e_et{i}": _pname("u", i) for i in hyp}})
    g["e3"] = _gen(D, R, {"e3": 1, "e2": "v", **{f"e_et{i}": _pname("v", i) for i in hyp}})
    g["f2"] = _gen(
        D, R, {"f2": 1, "f1": (-1, "v"), "f3": "u", **{f"f_et{i}": _pname("w", i) for i in hyp}}
    )
    for i in hyp:
        g[f"e_mu{i}"] = _gen(
            D, R, {f"e_mu{i}": 1, "e2": _pname("w", i), **{f"e_et{j}": _pname("w", i, j) for j in hyp}}
        )
    for i in hyp:
        g[f"f_mu{i}"] = _gen(
            D,
            R,
            {
                f"f_mu{i}": 1,
                "f1": (-1, _pname("v", i)),
                "f3": _pname("u", i),
                **{f"f_et{j}": _pname("w", j, i) for j in hyp},
            },
        )
    P = ("e1", "e3") + tuple(f"e_mu{i}" for i in hyp)
    Q = ("f2",) + tuple(f"f_mu{i}" for i in hyp)
    return DeformedHodge(D, R, g, P, Q, "I")


def _case_two(D, n, m, hyp) -> DeformedHodge:
    sharp = range(1, n - m - 1)
    params = ["u", "v", "w"]
    for letter in "uvwx":
        params += [_pname(letter, i) for i in hyp]
    params += [_pname("x", i, l) for i in hyp for l in hyp]
    params += [_pname("y", k) for k in sharp]
    params += [_pname("y", k, j) for k in sharp for j in hyp]
    R = SquareZeroRing(D.base, params)
    et = lambda letter: {f"e_et{i}": _pname(letter, i) for i in hyp}  # noqa: E731
    g = {}
    g["e1"] = _gen(D, R, {"e1": 1, "e2": (-1, "u"), **et("u")})
    g["e3"] = _gen(D, R, {"e3": 1, "e2": "v", **et("v")})
    g["e4"] = _gen(D, R, {"e4": 1, "e2": "w", **et("w")})
    g["f3"] = _gen(
        D,
        R,
        {
            "f3": 1,
            "f1": "w",
            "f2": "v",
            "f4": "u",
            **{f"f_et{l}": (-1, _pname("x", l)) for l in hyp},
            **{f"f_sharp{k}": (-1, _pname("y", k)) for k in sharp},
        },
    )
    for i in hyp:
        g[f"e_mu{i}"] = _gen(
            D, R, {f"e_mu{i}": 1, "e2": _pname("x", i), **{f"e_et{l}": _pname("x", i, l) for l in hyp}}
        )
    for i in hyp:
        g[f"f_mu{i}"] = _gen(
            D,
            R,
            {
                f"f_mu{i}": 1,
                "f1": (-1, _pname("w", i)),
                "f2": (-1, _pname("v", i)),
                "f4": _pname("u", i),
                **{f"f_et{l}": _pname("x", l, i) for l in hyp},
                **{f"f_sharp{k}": _pname("y", k, i) for k in sharp},
            },
        )
    for j in sharp:
        g[f"e_sharp{j}"] = _gen(
            D,
            R,
            {f"e_sharp{j}": 1, "e2": _pname("y", j), **{f"e_et{l}": _pname("y", j, l) for l in hyp}},
        )
    P = ("e1", "e3", "e4") + tuple(f"e_mu{i}" for i in hyp) + tuple(f"e_sharp{j}" for j in sharp)
    Q = ("f3",) + tuple(f"f_mu{i}" for i in hyp)
    return DeformedHodge(D, R, g, P, Q, "II")


def _case_equal(D, m, hyp) -> DeformedHodge:
    params = [_pname("w", i) for i in hyp] + [_pname("w", i, j) for i in hyp for j in hyp]
    params += ["u"] + [_pname("u", i) for i in hyp]
    R = SquareZeroRing(D.base, params)
    g = {}
    for i in hyp:
        g[f"e_mu{i}"] = _gen(
            D,
            R,
            {f"e_mu{i}": 1, "e_flat": _pname("w", i), **{f"e_et{j}": _pname("w", i, j) for j in hyp}},
        )
    g["e_sharp"] = _gen(
        D, R, {"e_sharp": 1, "e_flat": "u", **{f"e_et{j}": _pname("u", j) for j in hyp}}
    )
    for i in hyp:
        g[f"f_mu{i}"] = _gen(
            D,
            R,
            {f"f_mu{i}": 1, "f_sharp": _pname("u", i), **{f"f_et{j}": _pname("w", j, i) for j in hyp}},
        )
    g["f_flat"] = _gen(
        D, R, {"f_flat": 1, "f_sharp": "u", **{f"f_et{j}": _pname("w", j) for j in hyp}}
    )
    P = ("e_sharp",) + tuple(f"e_mu{i}" for i in hyp)
    Q = ("f_flat",) + tuple(f"f_mu{i}" for i in hyp)
    return DeformedHodge(D, R, g, P, Q, "n=m")


# admissibility -----------------------------------------------------------------


def check_admissible(df: DeformedHodge) -> dict:
    """The invariants every deformed Hodge filtration must satisfy."""
    D, R = df.space, df.ring
    at_x = [df.at_x(s) for s in df.gens]
    out = {}
    out["reduces to omega_x"] = linalg.same_span(at_x, D.omega())
    out["rank g direct summand"] = len(at_x) == D.g and linalg.rank(at_x) == D.g
    out["O_E-stable"] = all(D.type_of(list(v)) is not None for v in df.gens.values())
    gens = list(df.gens.values())
    out["isotropic"] = all(not D.pair(list(a), list(b), R) for a in gens for b in gens)
    out["parameter count nm"] = len(R.params) == df.n * df.m
    out["P/Q split by type"] = all(
        D.type_of(df.at_x(s)) == SIGMA for s in df.P_order
    ) and all(D.type_of(df.at_x(s)) != SIGMA for s in df.Q_order)
    return out


# Hasse family -------------------------------------------------------------------


def hasse_family(df: DeformedHodge) -> dict:
    """V_Q, V_P, H over R and the local equation of the almost-ordinary locus."""
    data = hasse_from_generators(df.space, df.P_gens(), df.Q_gens(), df.ring)
    detH = data["H"].det()
    detVQ = data["V_Q"].det() if df.n == df.m else None
    detVP = data["V_P"].det() if df.n == df.m else None
    data["det_H"] = detH
    data["det_V_Q"] = detVQ
    data["det_V_P"] = detVP
    data["local_equation"] = detH if df.n > df.m else detVQ
    return data


def expected_hasse_display(df: DeformedHodge, first_row_letter: str = "u") -> list[list]:
    """[[u, l1, ..., l_{m-1}], [0, I]] with l = first_row_letter."""
    R, m = df.ring, df.m
    M = linalg.zeros(R, m, m)
    M[0][0] = R.t("u")
    for i in range(1, m):
        M[0][i] = R.t(_pname(first_row_letter, i))
        M[i][i] = R.one
    return M


def unit_multiple_of(x: SqZeroElement, name: str):
    """The unit c with x = c * t_name, or None."""
    if x.const:
        return None
    c = x.coefficient(name)
    if not c.is_unit():
        return None
    rest = [v for t, v in zip(x.ring.params, x.lin) if t != name and v]
    return None if rest else c


# Gauss-Manin and Kodaira-Spencer --------------------------------------------------


def gauss_manin(df: DeformedHodge, name: str) -> dict:
    """nabla(generator) = sum_t dt (x) v_t, returned as {t: v_t} (nonzero v_t only)."""
    if name not in df.gens:
        raise KeyError(f"unknown generator {name!r}")
    out = {}
    for a, t in enumerate(df.ring.params):
        v = [c.lin[a] for c in df.gens[name]]
        if any(v):
            out[t] = v
    return out


def gauss_manin_str(df: DeformedHodge, name: str) -> str:
    terms = []
    for t, v in gauss_manin(df, name).items():
        vec = " + ".join(
            b if str(c) == "1" else f"({c}){b}" for b, c in zip(df.space.names, v) if c
        )
        terms.append(f"({vec}) (x) d{t}")
    return " + ".join(terms) if terms else "0"


@dataclass(frozen=True)
class KSMatrix:
    row_labels: tuple  # (p_name, q_name)
    col_labels: tuple  # parameter names
    matrix: tuple

    def rows(self):
        return [list(r) for r in self.matrix]

    @property
    def rank(self) -> int:
        return linalg.rank(self.rows())

    @property
    def invertible(self) -> bool:
        return len(self.row_labels) == len(self.col_labels) == self.rank

    def row(self, p_name: str, q_name: str) -> list:
        return list(self.matrix[self.row_labels.index((p_name, q_name))])


def ks_matrix(df: DeformedHodge) -> KSMatrix:
    D = df.space
    labels, rows = [], []
    for pn in df.P_order:
        nab = gauss_manin(df, pn)
        for qn in df.Q_order:
            qx = df.at_x(qn)
            labels.append((pn, qn))
            rows.append(
                [D.pair(nab[t], qx) if t in nab else D.base.zero for t in df.ring.params]
            )
    return KSMatrix(tuple(labels), tuple(df.ring.params), tuple(tuple(r) for r in rows))


def ks_form(ks: KSMatrix, df: DeformedHodge, p_name: str, q_name: str) -> OneForm:
    return OneForm(df.ring, ks.row(p_name, q_name))


def _quotient_map(df: DeformedHodge) -> list[list]:
    """P|_x -> P_mu (n > m, kernel P_0) or V_P|_x (n = m), as a matrix."""
    VP = hasse_family(df)["V_P"]
    VPx = linalg.residue_matrix(VP.rows())
    if df.n == df.m:
        return VPx
    R, piv = linalg.rref(VPx)
    return R[: len(piv)]


class PsiMap:
    """eta -> psi(eta), with KS inverted once."""

    def __init__(self, df: DeformedHodge):
        k = df.space.base
        ks = ks_matrix(df)
        if not ks.invertible:
            raise ZeroDivisionError("Kodaira-Spencer matrix is singular")
        self.df = df
        self.ks = ks
        self._solve = linalg.inverse(linalg.transpose(ks.rows()), k)
        self._quot = _quotient_map(df)

    def _coeffs(self, eta) -> list:
        k = self.df.space.base
        if isinstance(eta, OneForm):
            return list(eta.coeffs)
        if isinstance(eta, SqZeroElement):
            return list(d(eta).coeffs)
        return [k(eta.get(t, 0)) for t in self.df.ring.params]

    def __call__(self, eta) -> list[list]:
        k = self.df.space.base
        xi = linalg.mat_vec(self._solve, self._coeffs(eta), k)
        m = self.df.m
        Xi = [xi[i * m : (i + 1) * m] for i in range(self.df.n)]
        return linalg.mat_mul(self._quot, Xi, k)

    def of_param(self, name: str) -> list[list]:
        return self(OneForm.basis(self.df.ring, name))


def psi(df: DeformedHodge, eta) -> list[list]:
    """psi(eta) as a matrix: rows = P_mu (or Q^{(p)}) coordinates, cols = Q generators."""
    return PsiMap(df)(eta)


def psi_of_param(df: DeformedHodge, name: str) -> list[list]:
    return PsiMap(df).of_param(name)


def theorem_report(n: int, m: int, p: int) -> dict:
    """Everything the vanishing theorem needs, for one signature."""
    df = universal_ao_deformation(n, m, p)
    adm = check_admissible(df)
    hf = hasse_family(df)
    ks = ks_matrix(df)
    eq = hf["local_equation"]
    out = {
        "signature": [n, m],
        "p": p,
        "case": df.case,
        "params": list(df.params),
        "admissible": adm,
        "hasse_matrix": [[str(x) for x in r] for r in hf["H"].matrix],
        "local_equation": str(eq),
        "local_equation_is_u": unit_multiple_of(eq, "u") is not None,
        "ks_rank": ks.rank,
        "ks_size": len(ks.row_labels),
    }
    if ks.invertible:
        ps = PsiMap(df)
        out["psi(du) = 0"] = linalg.is_zero(ps(d(eq)))
        out["nonzero psi"] = [t for t in df.params if not linalg.is_zero(ps.of_param(t))]
    else:
        out["psi(du) = 0"] = False
        out["nonzero psi"] = []
    out["ok"] = (
        all(adm.values())
        and out["local_equation_is_u"]
        and ks.invertible
        and out["psi(du) = 0"]
        and bool(out["nonzero psi"])
    )
    return out


# pole-order audit ---------------------------------------------------------------------


def pole_order_audit(k: int, p: int, e: int) -> dict:
    """w-adic order bookkeeping for d(f / a^k) on the ramified cover.

    With ord_w(a) = 1 and u = w^e, write f/a^k = sum_{r >= -k} g_r(v) w^r.
    Then

        d(f/a^k) = sum w^r dg_r  +  sum r g_r w^r u^{-1} du.

    After multiplying by a^k the first summand has order k + r.  The second
    has order k + r - e on its own, but psi(du) vanishes to order >= e along
    u = 0, which restores k + r.
    """
    if not isinstance(k, int) or k < 0:
        raise ValueError("weight k must be a nonnegative integer")
    if e not in (p * p - 1, p - 1):
        raise ValueError(f"ramification must be p^2-1 or p-1, got {e}")
    rs = range(-k, -k + e + 1)
    first = [k + r for r in rs]
    second = [(r, k + r - e, k + r - e + e) for r in rs]
    report = {
        "k": k,
        "p": p,
        "e": e,
        "first_summand_min_order": min(first),
        "second_summand_min_order_before_psi": min((s[1] for s in second), default=None),
        "second_summand_min_order": min((s[2] for s in second), default=None),
    }
    mins = [report["first_summand_min_order"]]
    if report["second_summand_min_order"] is not None:
        mins.append(report["second_summand_min_order"])
    report["min_order"] = min(mins)
    report["holomorphic"] = report["min_order"] >= 0
    return report
