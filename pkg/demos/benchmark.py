"""
Parameter grid against k-means
==============================

The 3 x 3 grid of lambda and delta values, each fitted on half the data
and extended to the rest, next to plain k-means on the PCA features.
The best-accuracy row is starred.
"""
from issc import gen_union_of_subspaces
from issc.bench import format_table, run_bench

ds = gen_union_of_subspaces(k=4, dim_ambient=40, dim_sub=5, per_cluster=80,
                            noise_sigma=0.01, seed=3)
report = run_bench(ds, k=4, in_sample_count=ds.count // 2, seed=0)
print(format_table(report))
