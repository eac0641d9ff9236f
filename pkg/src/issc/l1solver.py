"""l1-minimization by homotopy along the LASSO regularization path.

The solver targets

    min ||c||_1   s.t.   ||y - D c||_2 <= delta

by following the piecewise-linear LASSO path

    c(lam) = argmin 1/2 ||y - D c||_2^2 + lam ||c||_1

from ``lam = max|D^T y|`` (where ``c = 0``) downward. Each breakpoint adds
or removes one coordinate of the active set. The walk stops at the first
point where the residual norm drops to ``delta`` or the regularization
weight reaches ``config.lam``.

:func:`lp_oracle` solves the ``delta = 0`` problem exactly as a linear
program and serves as an independent check.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg
from scipy.optimize import linprog

from .errors import DimensionError, InfeasibleError, ParameterError

RIDGE = 1e-12


@dataclass(frozen=True)
class L1Config:
    """Stopping rules for :func:`solve_l1`.

    Parameters
    ----------
    lam : float
        Smallest regularization weight visited on the path (> 0).
    delta : float
        Residual tolerance in l2-norm units (>= 0).
    max_iters : int or None
        Cap on path breakpoints. ``None`` means ``4 * p``.
    """

    lam: float = 1e-6
    delta: float = 1e-3
    max_iters: int | None = None

    def __post_init__(self):
        if not self.lam > 0:
            raise ParameterError(f"lam must be positive, got {self.lam}")
        if not self.delta >= 0:
            raise ParameterError(f"delta must be non-negative, got {self.delta}")
        if self.max_iters is not None and self.max_iters < 1:
            raise ParameterError(f"max_iters must be >= 1, got {self.max_iters}")


@dataclass
class SparseCode:
    """Result of :func:`solve_l1`.

    ``converged`` means the residual tolerance was met. ``stop_reason`` is
    one of ``"residual"``, ``"lambda"``, ``"max_iters"`` or ``"zero"`` (the
    zero vector already satisfies the tolerance or no column correlates
    with y).
    """

    coefficients: np.ndarray
    residual_norm: float
    iterations: int
    converged: bool
    stop_reason: str
    path: list = field(default_factory=list)


def _residual_tol(y):
    return 1e-9 * max(1.0, float(np.linalg.norm(y)))


def _direction(G, s):
    """Solve ``G d = s`` for the active-set equiangular direction."""
    try:
        cf = scipy.linalg.cho_factor(G, check_finite=False)
        d = scipy.linalg.cho_solve(cf, s, check_finite=False)
        if np.all(np.isfinite(d)):
            return d
    except np.linalg.LinAlgError:
        pass
    # duplicated or dependent columns
    n = G.shape[0]
    return np.linalg.lstsq(G + RIDGE * np.eye(n), s, rcond=None)[0]


def _first_residual_hit(r, u, delta):
    """Smallest positive t with ||r - t u|| = delta, or inf."""
    uu = float(u @ u)
    if uu == 0.0:
        return np.inf
    ru = float(r @ u)
    rr = float(r @ r)
    disc = ru * ru - uu * (rr - delta * delta)
    if disc < 0:
        return np.inf
    root = (ru - np.sqrt(disc)) / uu
    return root if root > 0 else np.inf


def solve_l1(y, dictionary, config=L1Config(), record_path=False):
    """Sparse code of `y` over the columns of `dictionary` by homotopy.

    Parameters
    ----------
    y : ndarray, shape (m,)
    dictionary : ndarray, shape (m, p)
    config : L1Config
    record_path : bool
        If true, ``result.path`` holds ``(lam, ||c||_1, ||y - Dc||_2)`` at
        every breakpoint, starting from ``c = 0``.

    Returns
    -------
    SparseCode
        Running out of iterations is not an error; the last iterate is
        returned with ``converged=False``.
    """
    D = np.asarray(dictionary, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if D.ndim != 2 or D.shape[0] != y.shape[0] or D.shape[1] < 1:
        raise DimensionError(f"dictionary shape {D.shape} incompatible with y of length {y.shape[0]}")
    if not (np.all(np.isfinite(D)) and np.all(np.isfinite(y))):
        raise DimensionError("non-finite value in y or dictionary")

    p = D.shape[1]
    max_iters = config.max_iters if config.max_iters is not None else 4 * p
    tol = _residual_tol(y)
    delta = config.delta

    c = np.zeros(p)
    r = y.copy()
    corr = D.T @ r
    lam = float(np.max(np.abs(corr)))
    rnorm = float(np.linalg.norm(r))
    path = [(lam, 0.0, rnorm)] if record_path else []

    def done(reason, iters):
        return SparseCode(c, rnorm, iters, rnorm <= delta + tol, reason, path)

    if rnorm <= delta or lam <= 0.0:
        return done("zero", 0)
    if lam <= config.lam:
        return done("lambda", 0)

    lam_scale = lam
    tiny = 1e-14 * lam_scale
    settle = 1e-9 * lam_scale
    active = [int(np.argmax(np.abs(corr)))]
    signs = [float(np.sign(corr[active[0]]))]
    just_added, just_removed = active[0], -1

    for it in range(1, max_iters + 1):
        A = np.array(active)
        s = np.array(signs)
        DA = D[:, A]
        dA = _direction(DA.T @ DA, s)
        u = DA @ dA
        a = D.T @ u

        with np.errstate(divide="ignore", invalid="ignore"):
            g_pos = np.where(1.0 - a > 1e-12, (lam - corr) / (1.0 - a), np.inf)
            g_neg = np.where(1.0 + a > 1e-12, (lam + corr) / (1.0 + a), np.inf)
        g_in = np.minimum(np.where(g_pos > tiny, g_pos, np.inf),
                          np.where(g_neg > tiny, g_neg, np.inf))
        g_in[A] = np.inf
        # a coordinate that just left sits on the boundary; ignore roundoff re-entry
        if just_removed >= 0 and g_in[just_removed] <= settle:
            g_in[just_removed] = np.inf
        j_add = int(np.argmin(g_in))
        gam_add = g_in[j_add]

        with np.errstate(divide="ignore", invalid="ignore"):
            g_out = np.where(dA != 0.0, -c[A] / dA, np.inf)
        g_out[(g_out <= tiny) | ((A == just_added) & (g_out <= settle))] = np.inf
        k_rem = int(np.argmin(g_out))
        gam_rem = g_out[k_rem]

        gam_lam = lam - config.lam
        gam_res = _first_residual_hit(r, u, delta) if delta > 0 else np.inf
        gam_stop = min(gam_lam, gam_res, lam)
        gam = min(gam_add, gam_rem, gam_stop)

        c[A] += gam * dA
        lam -= gam
        just_added, just_removed = -1, -1
        if gam == gam_rem and gam < gam_stop:
            gone = active.pop(k_rem)
            signs.pop(k_rem)
            c[gone] = 0.0
            just_removed = gone
        elif gam == gam_add and gam < gam_stop:
            active.append(j_add)
            signs.append(float(np.sign(corr[j_add] - gam * a[j_add])))
            just_added = j_add

        r = y - D @ c
        corr = D.T @ r
        rnorm = float(np.linalg.norm(r))
        if record_path:
            path.append((lam, float(np.abs(c).sum()), rnorm))

        if gam == gam_res or rnorm <= delta + tol or lam <= 0.0:
            return done("residual" if rnorm <= delta + tol else "lambda", it)
        if gam == gam_lam:
            return done("lambda", it)
        if not active:
            # every coefficient left the support; the path restarts from c = 0
            j = int(np.argmax(np.abs(corr)))
            active, signs = [j], [float(np.sign(corr[j]))]
            just_added = j

    return done("max_iters", max_iters)


def lp_oracle(y, dictionary):
    """Exact basis pursuit ``min ||c||_1 s.t. D c = y`` as a linear program.

    Splits ``c = c_plus - c_minus`` with both parts non-negative and solves
    with the HiGHS dual simplex. Intended for small instances.

    Returns
    -------
    c : ndarray, shape (p,)
    objective : float

    Raises
    ------
    InfeasibleError
        If `y` is not in the column span of `dictionary`.
    """
    D = np.asarray(dictionary, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64).ravel()
    if D.ndim != 2 or D.shape[0] != y.shape[0]:
        raise DimensionError(f"dictionary shape {D.shape} incompatible with y of length {y.shape[0]}")
    p = D.shape[1]
    res = linprog(np.ones(2 * p), A_eq=np.hstack([D, -D]), b_eq=y,
                  bounds=(0, None), method="highs-ds")
    if res.status == 2:
        raise InfeasibleError("y is not in the span of the dictionary")
    if not res.success:
        raise InfeasibleError(f"LP failed: {res.message}")
    c = res.x[:p] - res.x[p:]
    return c, float(res.fun)
