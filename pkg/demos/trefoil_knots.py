"""
Two trefoil knots, clustered inductively
========================================

Half of each knot is clustered with the full sparse-subspace pipeline;
the other half is never seen during fitting and is labeled afterwards by
projecting it into the learned embedding and copying the label of the
nearest in-sample point.
"""
import numpy as np

from issc import L1Config, accuracy, fit, gen_trefoil_knots

per_knot = 400
ds = gen_trefoil_knots(per_knot, separation=9.0, seed=0)
print("points:", ds.points.shape, "(3-D, one per column)")

# 200 in-sample and 200 out-of-sample points from each knot
rng = np.random.default_rng(0)
order = [k * per_knot + rng.permutation(per_knot) for k in range(2)]
ins = ds.subset(np.concatenate([o[:200] for o in order]))
outs = ds.subset(np.concatenate([o[200:] for o in order]))

res = fit(ins.points, k=2, l1=L1Config(1e-6, 1e-3), pca_energy=None)
print("in-sample accuracy:  %.3f" % accuracy(res.assignment.labels, ins.labels))

# the graph barely links the two knots
C = np.abs(res.codes.C)
cross = ins.labels[:, None] != ins.labels[None, :]
print("share of code mass between knots: %.2e" % (C[cross].sum() / C.sum()))

# new points go through the stored preprocessing and projection
ext = res.model.predict(outs.points)
print("embedding dimension:", res.model.projection.d)
print("out-of-sample accuracy: %.3f" % accuracy(ext.labels, outs.labels))
print("median distance to nearest in-sample point: %.4f" % np.median(ext.distances))

for name, secs in res.timings.items():
    print("  %-20s %.3f s" % (name, secs))
