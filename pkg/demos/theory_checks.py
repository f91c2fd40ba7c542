"""
Checking the closed forms numerically
=====================================

Each identity is compared against brute-force enumeration on small sets.
"""

import numpy as np

import sskmeans as sk
from sskmeans import theory

rng = np.random.default_rng(2)
A = rng.normal(size=(7, 3))

# Expected potential when the center is the mean of g random exemplars.
for g in (1, 3, 7):
    brute = theory.exemplar_mean_oracle(A, g)
    closed = theory.expected_potential_from_exemplars(A, g)
    print(f"g={g}: enumerated {brute:.6f}  closed form {closed:.6f}  factor {theory.exemplar_mean_factor(7, g):.4f}")

# Moving the center away from the mean costs n * |shift|^2.
lhs, rhs = theory.shift_identity(A, np.array([1.0, -2.0, 0.5]))
print(f"shift identity: {lhs:.6f} vs {rhs:.6f}")

# A D^2-sampled point from one cluster costs at most 8x that cluster's optimum.
cluster = rng.normal(size=(30, 2)) + 10
lhs, rhs = theory.d2_center_check(cluster, np.zeros((1, 2)))
print(f"expected cost {lhs:.2f} <= {rhs:.2f}")

# Worst-case seeding guarantees shrink as more classes are labeled.
for G in (0, 6, 12, 18, 23, 24):
    print(f"G={G:2d}  bound {sk.seeding_bound(24, G, [100] * 24, [5] * 24):7.3f}")

# The full randomized oracle suite, as run by `sskmeans oracle`.
for name, res in theory.oracle_suites(rng, datasets_per_cell=5, max_n=7).items():
    print(f"{name:24s} checked={res['checked']:5d} failures={res['failures']}")
