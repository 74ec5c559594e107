"""Tour of the symmetric-function kernel.

Elementary symmetric polynomials, Newton transformations and their trace
identities, the admissibility cone, the Newton-Maclaurin gaps, and the exact
binomial transform between plain and shifted curvature means.
"""

import math
from fractions import Fraction

import numpy as np

from shiftcurv import symfun

rng = np.random.default_rng(0)

print("=== elementary symmetric functions ===")
lam = [0.5, 1.2, 2.0, 3.1]
for k in range(len(lam) + 1):
    print(f"  sigma_{k}({lam}) = {symfun.elementary_symmetric(lam, k):.6f}")

print("\n=== Newton transformation trace identities ===")
A = rng.normal(size=(4, 4))
A = A + A.T
for k in range(1, 5):
    T = symfun.newton_tensor(A, k - 1)
    sk = symfun.elementary_symmetric_of_matrix(A, k)
    print(f"  k={k}: tr(T_{k-1} A) = {np.trace(T @ A):+.6f}   "
          f"k*sigma_k = {k * sk:+.6f}")

print("\n=== admissibility cone ===")
for vec in ([1.0, 2.0, 3.0], [3.0, 1.0, -0.5], [1.0, -2.0, 1.0]):
    inside, rep = symfun.cone_membership(vec, 3)
    print(f"  {vec}: inside Gamma_3 = {inside} (largest valid order "
          f"{rep.max_k})")

print("\n=== Newton-Maclaurin gaps ===")
lam = rng.normal(loc=1.0, scale=0.3, size=5)
for k, l in ((2, 1), (3, 2), (5, 1)):
    g1, g2 = symfun.newton_maclaurin_gap(lam, k, l)
    print(f"  (k,l)=({k},{l}): H_(k-1)H_l - H_k H_(l-1) = {g1:.3e},  "
          f"H_l - H_k^(l/k) = {g2:.3e}")
print("  umbilic point [2,2,2,2,2]:",
      symfun.newton_maclaurin_gap([2.0] * 5, 3, 1))

print("\n=== exact shift transform (kappa -> kappa - 1) ===")
lam = [Fraction(3, 2), Fraction(5, 3), Fraction(1, 4)]
n = len(lam)
H = [symfun.elementary_symmetric(lam, k, exact=True) / math.comb(n, k)
     for k in range(n + 1)]
Hs = [symfun.shift_transform(H, k, "to_shifted", exact=True)
      for k in range(n + 1)]
back = [symfun.shift_transform(Hs, k, "from_shifted", exact=True)
        for k in range(n + 1)]
print(f"  H        = {H}")
print(f"  shifted  = {Hs}")
print(f"  inverse round trip exact: {back == H}")
