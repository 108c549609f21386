"""
Holographic transforms and where invariance breaks
==================================================

Conjugating every signature by an invertible basis change (covariant
slots by T, contravariant slots by its inverse) leaves every closed
grid value unchanged.  That invariance is exact for mixed signature
sets; trying to force it for one-sided sets fails, and the scaling
family below measures how it fails.
"""

import warnings

import numpy as np

from holant import (
    DefectiveSpectrumWarning,
    HoloTransform,
    MixedTensor,
    epsilon_family_counterexample,
    epsilon_family_jordan,
    is_orthogonal_preserver,
    is_permutation_preserver,
    verify_holant_theorem,
)

q = 3
rng = np.random.default_rng(11)

# A random mixed signature set and a random invertible transform.
fs = {
    "a": MixedTensor.from_matrix(rng.standard_normal((q, q))),
    "b": MixedTensor(q, 2, 1, rng.standard_normal((q, q, q))),
}
t = HoloTransform(q, rng.standard_normal((q, q)) + np.eye(q))

# Every closed grid over fs and over t(fs) evaluates identically.
report = verify_holant_theorem(fs, t, max_vertices=4)
print("grids checked:", report.grids_checked)
print("max scaled error:", report.max_scaled_error)
assert report.passed

# Which transforms fix the binary equality on both sides?  Orthogonal
# ones preserve it as a bilinear form; permutations preserve equality
# of every arity.  A rotation is orthogonal but not a permutation.
theta = 0.3
rot = HoloTransform(2, np.array([[np.cos(theta), -np.sin(theta)],
                                 [np.sin(theta), np.cos(theta)]]))
perm = HoloTransform(2, np.array([[0.0, 1.0], [1.0, 0.0]]))
print("rotation: orthogonal:", is_orthogonal_preserver(rot),
      " permutation:", is_permutation_preserver(rot))
print("swap:     orthogonal:", is_orthogonal_preserver(perm),
      " permutation:", is_permutation_preserver(perm))

# Diagonal scaling toward the eigenvalue diagonal.  For a matrix with
# distinct eigenvalues the conjugates converge at rate eps.
f = MixedTensor.from_matrix(np.array([[2.0, 1.0], [0.0, 5.0]]))
for eps in (1e-1, 1e-2, 1e-3):
    _, scaled = epsilon_family_jordan(f, eps)
    off = abs(scaled.matrix()[0, 1])
    print(f"eps={eps:g}  off-diagonal magnitude {off:.3e}")

# A defective spectrum leaves a nilpotent part that no scaling removes;
# the family warns about it.
nil = MixedTensor.from_matrix(np.array([[1.0, 1.0], [0.0, 1.0]]))
with warnings.catch_warnings(record=True) as caught:
    warnings.simplefilter("always")
    epsilon_family_jordan(nil, 1e-2)
print("defective input warns:",
      any(issubclass(w.category, DefectiveSpectrumWarning) for w in caught))

# The same family drives the counterexample: a transformed disequality
# can approach a target signature that no exact transform reaches, with
# the gap shrinking linearly in eps.
for eps in (1e-1, 1e-2, 1e-3):
    rep = epsilon_family_counterexample(a=0.0, b=1.0, eps=eps)
    print(f"eps={eps:g}  distance to target {rep.distance:.3e}"
          f"  (expected {rep.expected_distance:.3e})")
    assert rep.disequality_fixed

rep = epsilon_family_counterexample(a=0.0, b=1.0, eps=1e-3)
print("transformed disequality stays disequality:", rep.disequality_fixed)
print("limit gap at eps=1e-3:", rep.distance)
