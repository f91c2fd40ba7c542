"""
Seeding with and without labeled exemplars
==========================================

Compare three ways of picking initial centers on a 24-component mixture.
"""

import numpy as np

import sskmeans as sk

rng = np.random.default_rng(0)
ds = sk.generate_mixture(sk.GAUSSIAN_MIXTURE, rng)
X = ds.data
opt = sk.optimal_cost_proxy(X, ds.true_labels, ds.k)
print(f"{ds.n} points in {ds.d}-D, {ds.k} components, reference cost {opt:.1f}")

# Label 5 points from each of 12 randomly chosen components.
labeling = sk.sample_supervision(ds, 12, 5, rng)
print("supervised classes:", labeling.present_labels.tolist())

# The first 12 centers are the exemplar centroids; the rest are drawn
# with probability proportional to squared distance.
C = sk.ss_kmeanspp_init(X, labeling, ds.k, rng)
print("provenance:", sorted(set(C.provenance)))
print("ss-k-means++ seed cost / reference:", round(sk.cost(X, C) / opt, 3))

# Same exemplars, but the remaining centers are uniform picks.
U = sk.constrained_init(X, labeling, ds.k, rng)
print("uniform-fill seed cost / reference:", round(sk.cost(X, U) / opt, 3))

# Plain k-means++ ignores the labels entirely.
P = sk.kmeanspp_init(X, ds.k, rng)
print("k-means++ seed cost / reference:", round(sk.cost(X, P) / opt, 3))

# Averaged over draws, the D^2 fill stays under its worst-case guarantee.
fracs = [sk.cost(X, sk.ss_kmeanspp_init(X, labeling, ds.k, rng)) / opt for _ in range(50)]
print(f"mean over 50 draws {np.mean(fracs):.3f}, guarantee {sk.seeding_bound(ds.k, 12):.2f}")
