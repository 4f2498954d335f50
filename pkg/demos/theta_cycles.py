"""
Theta on Fourier-Jacobi expansions
==================================

Theta multiplies the coefficient at h by h. In rank one this is the
classical q d/dq, in higher rank it lands in a tensor-valued expansion.
"""

import random

from mutheta import gamma_act, hasse_expansion, multiply, theta
from mutheta.fjexp import cycle_report, expansion, random_expansion, random_gamma, theta_iterate

p = 5
f = expansion(p, {1: 1, 2: 3, 5: 2, 7: 1}, trunc=40, weight=12)
print("f          :", f)
print("theta f    :", theta(f))
print("weight tag :", theta(f).weight)

# theta^(p-1) fixes everything in the image of theta
g = theta(f)
print("theta^(p-1) g == g:", theta_iterate(g, p - 1).same_terms(g))

# the Hasse invariant has expansion 1 and weight p^2 - 1
A = hasse_expansion(p, trunc=40)
print("A * f has weight", multiply(A, f).weight, "and the same terms:", multiply(A, f).same_terms(f))

###############################################################################
# Rank two. Indices are 2x2 hermitian matrices over Z[sqrt(-58)].

rng = random.Random(1)
F = random_expansion(p, rng, m=2, trunc=15, size=4)
TF = theta(F)
print("rank-2 expansion with", len(F.terms), "terms; theta has coefficient rank", TF.coeff_rank)

gam = random_gamma(2, rng)
same = theta(gamma_act(gam, F)).same_terms(gamma_act(gam, TF))
print("theta commutes with the unimodular action:", same)

###############################################################################
# Theta cycles: weights go up by p + 1 until the drop at i0

for k0, i0 in [(12, 2), (12, 1), (20, 3)]:
    rep = cycle_report(k0, i0, p)
    print(f"k0={k0}, i0={i0}:", " -> ".join(map(str, rep["weights"])), "closes" if rep["closes"] else "open")
