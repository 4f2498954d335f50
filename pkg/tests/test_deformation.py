import pytest

from mutheta import check_admissible, gauss_manin, hasse_family, ks_matrix, pole_order_audit, universal_ao_deformation
from mutheta import linalg
from mutheta.deformation import (
    DeformedHodge,
    PsiMap,
    gauss_manin_str,
    ks_form,
    psi,
    psi_of_param,
    theorem_report,
    unit_multiple_of,
)
from mutheta.exactring import OneForm, d

GRID = [(2, 1), (3, 2), (4, 3), (5, 4), (3, 1), (4, 1), (5, 2), (6, 3), (2, 2), (3, 3), (4, 4)]


def vec(df, **coeffs):
    """Vector over the base field with the given basis coefficients."""
    k = df.space.base
    return [k(coeffs.get(s, 0)) for s in df.space.names]


def test_parameters_per_case():
    df = universal_ao_deformation(2, 1, 5)
    assert df.case == "I"
    assert set(df.gens) == {"e1", "e3", "f2"}
    assert df.params == ("u", "v")
    df = universal_ao_deformation(4, 1, 5)
    assert df.case == "II"
    assert df.params == ("u", "v", "w", "y1")
    df = universal_ao_deformation(2, 2, 5)
    assert df.case == "n=m"
    assert df.params == ("w1", "w11", "u", "u1")


@pytest.mark.parametrize("n,m", GRID + [(6, 1), (6, 4), (5, 1)])
def test_parameter_count_and_admissibility(n, m):
    df = universal_ao_deformation(n, m, 3)
    assert len(df.params) == n * m
    assert (df.n, df.m) == (n, m)
    assert all(check_admissible(df).values())


def test_many_indices_get_separators():
    df = universal_ao_deformation(12, 11, 3)
    assert {"u10", "w1_10", "w10_1", "w10_10"} <= set(df.params)
    assert "w110" not in df.params


def test_corrupted_generator_fails_isotropy():
    df = universal_ao_deformation(2, 1, 5)
    R = df.ring
    gens = dict(df.gens)
    f2 = list(gens["f2"])
    f2[df.space.index("f1")] = R.t("v")  # should be -v
    gens["f2"] = tuple(f2)
    bad = DeformedHodge(df.space, R, gens, df.P_order, df.Q_order, df.case)
    rep = check_admissible(bad)
    assert not rep["isotropic"]
    assert rep["reduces to omega_x"]


def test_gauss_manin_case_one():
    df = universal_ao_deformation(3, 2, 5)
    gm = gauss_manin(df, "e1")
    assert gm == {"u": vec(df, e2=1), "u1": vec(df, e_et1=1)}
    df = universal_ao_deformation(2, 1, 5)
    assert gauss_manin(df, "f2") == {"u": vec(df, f3=1), "v": vec(df, f1=-1)}
    assert gauss_manin_str(df, "f2") == "(f3) (x) du + ((4)f1) (x) dv"


def test_gauss_manin_of_horizontal_generator():
    df = universal_ao_deformation(2, 1, 5)
    R = df.ring
    gens = dict(df.gens)
    gens["e1"] = tuple(R(c.constant()) for c in gens["e1"])
    flat = DeformedHodge(df.space, R, gens, df.P_order, df.Q_order, df.case)
    assert gauss_manin(flat, "e1") == {}
    assert gauss_manin_str(flat, "e1") == "0"


def test_gauss_manin_unknown_generator():
    with pytest.raises(KeyError):
        gauss_manin(universal_ao_deformation(2, 1, 5), "e2")


def test_ks_e1_f2_is_minus_du():
    for p in (3, 5, 7):
        df = universal_ao_deformation(2, 1, p)
        ks = ks_matrix(df)
        assert ks_form(ks, df, "e1", "f2") == -OneForm.basis(df.ring, "u")
        # KS(e3 (x) f2) = -dv, so KS^{-1}(dv) = -e3 (x) f2
        assert ks_form(ks, df, "e3", "f2") == -OneForm.basis(df.ring, "v")


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_ks_rows_of_P0_span_du_and_du_i(m):
    df = universal_ao_deformation(m + 1, m, 5)
    ks = ks_matrix(df)
    rows = [ks.row("e1", q) for q in df.Q_order]
    k = df.space.base
    want = [[k.one if t == s else k.zero for t in df.params] for s in ["u"] + [f"u{i}" for i in range(1, m)]]
    assert linalg.same_span(rows, want)


@pytest.mark.parametrize("n,m", GRID)
@pytest.mark.parametrize("p", [3, 5])
def test_ks_invertible(n, m, p):
    ks = ks_matrix(universal_ao_deformation(n, m, p))
    assert ks.invertible and ks.rank == n * m


def test_psi_du_vanishes_by_hand_case_one():
    """For (2,1): KS^{-1}(du) = -e1 (x) f2 and e1 spans P0, so psi(du) = 0."""
    df = universal_ao_deformation(2, 1, 5)
    u = df.ring.t("u")
    assert linalg.is_zero(psi(df, d(u)))
    assert not linalg.is_zero(psi_of_param(df, "v"))


@pytest.mark.parametrize("n,m", GRID)
def test_psi_du_vanishes_on_local_equation(n, m):
    df = universal_ao_deformation(n, m, 3)
    eq = hasse_family(df)["local_equation"]
    assert unit_multiple_of(eq, "u") is not None
    ps = PsiMap(df)
    assert linalg.is_zero(ps(d(eq)))
    assert linalg.is_zero(ps({"u": 1}))
    assert any(not linalg.is_zero(ps.of_param(t)) for t in df.params)


def test_psi_is_additive():
    df = universal_ao_deformation(4, 1, 5)
    ps = PsiMap(df)
    R = df.ring
    a, b = R.t("v") * 2 + R.t("w"), R.t("y1") * 3 + R.t("u")
    lhs = ps(d(a + b))
    rhs = linalg.mat_add(ps(d(a)), ps(d(b)))
    assert lhs == rhs


def test_hasse_family_n_equals_m_factorisation():
    for m in (1, 2, 3):
        df = universal_ao_deformation(m, m, 5)
        hf = hasse_family(df)
        assert hf["det_H"] == hf["det_V_P"] ** 5 * hf["det_V_Q"]
        assert hf["det_V_Q"] == df.ring.t("u")
        assert hf["det_H"] == 0


def test_unit_multiple_of():
    df = universal_ao_deformation(2, 1, 5)
    R = df.ring
    assert unit_multiple_of(R.t("u") * 3, "u") == R.base(3)
    assert unit_multiple_of(R.t("u") + R.t("v"), "u") is None
    assert unit_multiple_of(R(1) + R.t("u"), "u") is None


def test_theorem_report_fields():
    rep = theorem_report(3, 1, 5)
    assert rep["ok"]
    assert rep["case"] == "II"
    assert rep["ks_rank"] == rep["ks_size"] == 3
    assert rep["hasse_matrix"] == [["u"]]


@pytest.mark.parametrize("bad", [(1, 2), (0, 0), (3, 0)])
def test_invalid_signature(bad):
    with pytest.raises(ValueError):
        universal_ao_deformation(*bad, 5)


# pole-order audit


def test_pole_audit_examples():
    rep = pole_order_audit(0, 5, 24)
    assert rep["min_order"] == 0 and rep["holomorphic"]
    rep = pole_order_audit(3, 5, 24)
    assert rep["second_summand_min_order_before_psi"] == 3 - 3 - 24
    assert rep["second_summand_min_order"] == 0
    for k in range(6):
        assert pole_order_audit(k, 7, 6)["min_order"] == 0


def test_pole_audit_errors():
    with pytest.raises(ValueError):
        pole_order_audit(2, 5, 7)
    with pytest.raises(ValueError):
        pole_order_audit(-1, 5, 24)
