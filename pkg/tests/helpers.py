"""Shared numeric helpers for the test suite."""

import numpy as np

from cartankit.ek import cubic_profile


def period_ratio(c1, c2):
    """Closed-form disk-period ratio a/b of the Delta > 0 sphere leaf."""
    prof = cubic_profile(c1, c2)
    r2, r3 = prof.roots[1], prof.roots[2]
    return (4.0 * c1 - r2 * r2) / (r3 * r3 - 4.0 * c1)


def c2_for_ratio(c1, target, tol=1e-15):
    """Bisect c2 (at fixed c1 > 0) so the sphere-leaf period ratio hits target.

    The ratio decreases monotonically from 1 to 0 as c2 sweeps the Delta > 0
    window (-4 c1^{3/2}/3, 4 c1^{3/2}/3), so plain bisection converges to
    machine precision for any target in (0, 1).
    """
    edge = 4.0 * c1 ** 1.5 / 3.0
    lo, hi = -edge * (1.0 - 1e-9), edge * (1.0 - 1e-9)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if period_ratio(c1, mid) > target:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def sphere_leaf_point(c1, c2, K, theta=0.0):
    """Point of the Delta > 0 sphere leaf at curvature K, orbit angle theta."""
    p = -K ** 3 / 12.0 + c1 * K + c2
    if p < 0:
        raise ValueError(f"K={K} lies outside the leaf (p={p:.3e} < 0)")
    r = np.sqrt(p)
    return np.array([K, r * np.cos(theta), r * np.sin(theta),
                     0.25 * K * K - c1])
