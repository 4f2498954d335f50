"""
The Hasse family and the map psi
================================

Deform an almost-ordinary point to first order, write down the Hasse
matrix over the deformation ring, and check that psi kills the
differential of its local equation.
"""

from mutheta import hasse_family, ks_matrix, universal_ao_deformation
from mutheta.deformation import PsiMap, gauss_manin_str, theorem_report
from mutheta.exactring import d

p = 7

for n, m in [(2, 1), (4, 1), (3, 3)]:
    df = universal_ao_deformation(n, m, p)
    print(f"--- signature ({n},{m}), case {df.case}")
    print("parameters:", " ".join(df.params))
    hf = hasse_family(df)
    for key in ("V_Q", "V_P", "H"):
        print(f"  {key} =", [[str(x) for x in r] for r in hf[key].matrix])
    eq = hf["local_equation"]
    print("  local equation:", eq)

    ks = ks_matrix(df)
    print("  Kodaira-Spencer rank:", ks.rank, "of", len(df.params))

    # psi(d eq) should vanish, psi(dt) for the other parameters should not
    ps = PsiMap(df)
    print("  psi(d eq) == 0:", not any(any(r) for r in ps(d(eq))))
    live = [t for t in df.params if any(any(r) for r in ps.of_param(t))]
    print("  psi(dt) != 0 for t in:", " ".join(live))

###############################################################################
# Gauss-Manin on a generator of the Hodge filtration

df = universal_ao_deformation(2, 1, p)
for g in df.gens:
    print(f"nabla({g}) = {gauss_manin_str(df, g)}")

###############################################################################
# The whole check as one report, over a small grid

for n, m in [(2, 1), (3, 2), (3, 1), (5, 2), (2, 2), (4, 4)]:
    rep = theorem_report(n, m, p)
    print(f"({n},{m}) case {rep['case']:>3}: {'PASS' if rep['ok'] else 'FAIL'}")
