# Zero-spectrum subspaces and the C(n, 2) bound
# =============================================
#
# Over F_q a space has the zero-spectrum property when no element has an
# eigenvalue in F_q other than 0.  Strictly upper triangular matrices are
# the model example, and their dimension C(n, 2) is the largest possible.

# %%
import numpy as np

from rankspan import nilspec, subspace, verify

for n in range(1, 6):
    T = subspace.strictly_upper_triangular(n, 3)
    print(n, T.dim, nilspec.has_zero_spectrum_property(T).status.value)

# %%
# Exhaustive check in Mat_2(F_2): no 2-dimensional subspace has the property.
print(verify.suite_gerstenhaber_exhaustive(2, 2).counts)

# %%
# A random subspace of a conjugated T_4^{++} has a zero row index and can
# be brought back to upper triangular form by a permutation.
rng = np.random.default_rng(11)
base = nilspec.conjugate_by_permutation(subspace.strictly_upper_triangular(4, 2), (3, 1, 4, 2))
V = subspace.random_subspace_of(base, 4, rng)
w = nilspec.find_zero_row_index(V)
print("zero row index", w.index)
sigma = nilspec.triangularizing_permutation(V, nilspec.RECURSIVE)
print("permutation", sigma, "re-verified", nilspec.triangularizes(V, sigma))

# %%
# If V contains E_{f(k),k} for every column k, the cycle of f assembles a
# matrix of V with eigenvalue 1, so V cannot have the property.
f = {1: 2, 2: 4, 3: 4, 4: 2}
W = subspace.coordinate_subspace(4, 4, 3, [(v, k) for k, v in f.items()])
c = nilspec.build_cycle_witness(W, f)
print("cycle", c.cycle)
print(c.matrix.tolist())
