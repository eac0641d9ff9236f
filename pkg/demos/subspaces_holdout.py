"""
Union of subspaces with a held-out half
=======================================

Noisy points from three 4-dimensional subspaces of R^30. The model is
fitted on half of them, saved to disk, loaded back and used to label the
other half.
"""
import tempfile
from pathlib import Path

import numpy as np

from issc import (L1Config, SplitSpec, accuracy, fit, gen_union_of_subspaces, load_model, nmi,
                  save_model, split)

ds = gen_union_of_subspaces(k=3, dim_ambient=30, dim_sub=4, per_cluster=100,
                            noise_sigma=0.01, seed=0)
ins, outs = split(ds, SplitSpec(in_sample_count=150, seed=0))

# a tight and a loose residual tolerance; noise makes the tight one less robust across seeds
for delta in (1e-3, 1e-1):
    res = fit(ins.points, 3, L1Config(lam=1e-6, delta=delta))
    pred = res.model.predict(outs.points).labels
    print("delta=%g  in %.3f  out %.3f  nmi %.3f" % (
        delta, accuracy(res.assignment.labels, ins.labels),
        accuracy(pred, outs.labels), nmi(pred, outs.labels)))

with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "subspaces.issc"
    save_model(res.model, path)
    print("model file: %d bytes, sidecar %s" % (path.stat().st_size, path.name + ".json"))
    again = load_model(path).predict(outs.points).labels
    print("reloaded model gives identical labels:", np.array_equal(again, pred))

# points arriving one at a time get exactly the same answer as a batch
single = [res.model.predict(outs.points[:, [i]]).labels[0] for i in range(10)]
print("one-by-one matches batch:", np.array_equal(single, pred[:10]))
