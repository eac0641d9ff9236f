"""
Sparse codes with the homotopy solver
=====================================

Each point is written as a sparse combination of the other points.
The homotopy solver follows the LASSO path down from large lambda; the
LP solver answers the same basis-pursuit question by a different route.
"""
import numpy as np

from issc import L1Config, lp_oracle, solve_l1

rng = np.random.default_rng(0)

# a small dictionary and a target built from two of its atoms
D = rng.standard_normal((6, 12))
D /= np.linalg.norm(D, axis=0)
y = 1.5 * D[:, 3] - 0.5 * D[:, 8]

code = solve_l1(y, D, L1Config(lam=1e-300, delta=0.0), record_path=True)
print("nonzeros:", np.flatnonzero(np.abs(code.coefficients) > 1e-9))
print("coefficients:", np.round(code.coefficients[[3, 8]], 6))
print("stopped because:", code.stop_reason, "after", code.iterations, "steps")

# the LP route agrees on the optimal l1 norm
c_lp, best = lp_oracle(y, D)
print("homotopy |c|_1 = %.10f, LP |c|_1 = %.10f" % (np.abs(code.coefficients).sum(), best))

# walking down the path: as lambda shrinks the code grows and the residual falls
for lam, l1, resid in code.path:
    print("lambda %.3e  |c|_1 %.4f  residual %.3e" % (lam, l1, resid))

# a loose residual tolerance stops the path early with fewer atoms
loose = solve_l1(y, D, L1Config(lam=1e-6, delta=0.5))
print("delta=0.5: residual %.3f with %d atoms" % (loose.residual_norm,
                                                 np.count_nonzero(loose.coefficients)))
