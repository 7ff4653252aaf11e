# Affine spaces that avoid low rank
# =================================
#
# Shifting the space of matrices whose top-left k x k block is strictly
# upper triangular by J_k gives an affine space where every element has
# rank at least k.  Its dimension np - C(k+1, 2) is the largest possible.

# %%
from rankspan import affine

A = affine.extremal_affine(3, 3, 2, 2)
print(A, "min rank", affine.min_rank(A), "h =", affine.h_value(3, 3, 2))

# %%
# Exhaustive confirmation of the upper bound on a tiny case: no coset of
# dimension h + 1 keeps rank >= k.
print(affine.check_h_bound(3, 2, 2, 2, affine.EXHAUSTIVE).counts)

# %%
# In Mat_2(F_2) there are non-linear cosets of codimension 2 with no
# invertible element; over larger fields such cosets are always linear.
from rankspan import verify

v = verify.suite_flanders(2, 2, 2)
print(v.status.value)
for k, c in v.counts.items():
    print(k, c)

# %%
# The linear span of the extremal coset for k = r + 1 is not spanned by
# its rank-r elements: those all sit inside the direction space.
from rankspan import strata

V = affine.unspanned_subspace(4, 4, 1, 2)
print("codim", V.codim, "span of rank 1:", strata.span_of_rank(V, 1).dim, "of", V.dim)
