# Rank strata of small matrix spaces
# ==================================
#
# A linear subspace of n x p matrices splits into rank strata.  Over a
# small prime field every element can be listed, so the strata can be
# counted exactly.

# %%
from rankspan import strata, subspace
from rankspan.subspace import MatSubspace

# The full space Mat_2(F_2): 16 matrices, 6 of them invertible.
full = MatSubspace.full(2, 2, 2)
print("Mat_2(F_2)        ", strata.rank_profile(full).to_dict())

# %%
# Upper triangular matrices T_2^+ form a hyperplane with only two
# invertible elements.  Those two span a plane, not the whole hyperplane.
T = subspace.upper_triangular(2, 2)
print("T_2^+             ", strata.rank_profile(T).to_dict())
print("span of rank 2    ", strata.span_of_rank(T, 2).dim, "of", T.dim)

# %%
# sl_2(F_2), the trace-zero matrices, is the other kind of hyperplane:
# its invertible elements span it.
sl2 = subspace.sl2_f2()
print("sl_2(F_2)         ", strata.rank_profile(sl2).to_dict())
cert = strata.find_span_certificate(sl2, 2)
print("certificate checks", cert.verify())
for g in cert.generators:
    print(g.tolist())

# %%
# Every one of the 15 hyperplanes of Mat_2(F_2) is one of these two kinds.
from rankspan import verify

v = verify.suite_oddcase()
print(v.status.value, v.counts)
