"""Adaptive tensor-Gauss-Legendre quadrature over rectangles.

Panels are refined by comparing the parent-panel estimate against the sum
over its four children; a panel is accepted when that disagreement fits in
its share (by area) of the global error budget.  Integrands may be vector
valued (the error test uses the worst component) and are evaluated on
flattened node arrays, so closed-form integrands vectorize and jitted
kernels slot in directly.
"""

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = ["QuadratureResult", "adaptive_quad2d"]


@lru_cache(maxsize=None)
def _gl_nodes(order):
    nodes, weights = np.polynomial.legendre.leggauss(order)
    # map from [-1, 1] to [0, 1]
    return 0.5 * (nodes + 1.0), 0.5 * weights


@dataclass
class QuadratureResult:
    value: np.ndarray
    error: float
    panels: int
    converged: bool


def _panel_eval(f, s0, s1, t0, t1, nodes, weights):
    ns = s0 + (s1 - s0) * nodes
    nt = t0 + (t1 - t0) * nodes
    S, T = np.meshgrid(ns, nt, indexing="ij")
    vals = np.asarray(f(S.ravel(), T.ravel()), dtype=float)
    if vals.ndim == 1:
        vals = vals[:, None]
    k = vals.shape[1]
    W = np.outer(weights, weights).ravel()
    out = (W[:, None] * vals).sum(axis=0)
    return out * (s1 - s0) * (t1 - t0), k


def adaptive_quad2d(f, s_range, t_range, rel_tol=1e-10, abs_tol=1e-14,
                    order=7, max_panels=20000):
    """Integrate ``f(s, t)`` (vectorized over flat arrays) over a rectangle.

    Returns a :class:`QuadratureResult` whose ``value`` has one entry per
    integrand component.  ``converged`` is False when the panel budget ran
    out before the tolerance was met; the error estimate stays honest in
    that case.
    """
    s0, s1 = map(float, s_range)
    t0, t1 = map(float, t_range)
    nodes, weights = _gl_nodes(order)
    area_total = abs((s1 - s0) * (t1 - t0))
    if area_total == 0.0:
        probe, k = _panel_eval(f, s0, s1 if s1 != s0 else s0 + 1.0,
                               t0, t1 if t1 != t0 else t0 + 1.0,
                               nodes, weights)
        return QuadratureResult(np.zeros(k), 0.0, 0, True)

    first, k = _panel_eval(f, s0, s1, t0, t1, nodes, weights)
    total = np.zeros(k)
    err_total = 0.0
    panels_done = 0
    # stack entries: (s0, s1, t0, t1, parent_estimate)
    stack = [(s0, s1, t0, t1, first)]
    global_scale = float(np.max(np.abs(first)))
    while stack:
        if panels_done + len(stack) > max_panels:
            # budget exhausted: accept remaining parents at face value
            for (a0, a1, b0, b1, est) in stack:
                total += est
                err_total += float(np.max(np.abs(est))) * 1e-3 + abs_tol
            return QuadratureResult(total, err_total, panels_done + len(stack),
                                    False)
        a0, a1, b0, b1, parent = stack.pop()
        am, bm = 0.5 * (a0 + a1), 0.5 * (b0 + b1)
        children = []
        child_sum = np.zeros(k)
        for (c0, c1) in ((a0, am), (am, a1)):
            for (d0, d1) in ((b0, bm), (bm, b1)):
                val, _ = _panel_eval(f, c0, c1, d0, d1, nodes, weights)
                children.append((c0, c1, d0, d1, val))
                child_sum += val
        panels_done += 1
        disagreement = float(np.max(np.abs(child_sum - parent)))
        area_frac = abs((a1 - a0) * (b1 - b0)) / area_total
        global_scale = max(global_scale, float(np.max(np.abs(total + child_sum))))
        budget = max(abs_tol, rel_tol * global_scale) * max(area_frac, 1e-16)
        if disagreement <= budget:
            total += child_sum
            err_total += disagreement
        else:
            stack.extend(children)
    return QuadratureResult(total, err_total, panels_done, True)
