"""
Dieudonne spaces at an almost-ordinary point
============================================

Build the smallest almost-ordinary space, check its axioms, and read off
the Hodge filtration, the subspace P0 and the Hasse matrix.
"""

from mutheta import ao21, ao_space, direct_sum, hyperbolic_mu_et, mu_ordinary, verify

p = 5
D = ao21(p)
print("basis:", " ".join(D.names))
print("types:", " ".join(D.types))

# every axiom should hold
rep = verify(D)
for name, ok in rep.checks.items():
    print(f"  {'ok ' if ok else 'BAD'} {name}")

desc = D.describe()
print("signature:", desc["signature"])
print("omega:", desc["omega"])
print("P0:", desc["P0"])

###############################################################################
# The Hasse matrix is a twisted map omega_Q -> omega_Q^(p^2). It is the
# identity at a mu-ordinary point and vanishes on the almost-ordinary one.

print("hasse at ao21:", desc["hasse_matrix"], "invariant", desc["hasse_invariant"])
M = mu_ordinary(3, 1, p)
print("hasse at mu_ordinary(3,1):", M.describe()["hasse_matrix"])

###############################################################################
# When n = m the Hasse invariant factors as hP^p * hQ and both vanish here.

for m in (1, 2, 3):
    E = ao_space(m, m, p)
    print(f"ao_space({m},{m}): hP = {E.hP()}, hQ = {E.hQ()}, omega = {E.omega_names()}")

# direct sums add signatures
S = direct_sum(ao21(p), hyperbolic_mu_et(p, 2))
print("ao21 + two hyperbolic planes:", S.signature(), "verified:", verify(S).ok)
