"""Hot numeric kernels for the extremal-Kahler leaf geometry.

These are the closed forms evaluated per quadrature node inside adaptive
integration and per grid cell inside parameter sweeps, so they carry the
optional numba acceleration from :mod:`._backend`.  Every kernel is written
in vectorized numpy style: the same source runs jitted or plain.

Notation: p(K) = -K^3/12 + c1 K + c2, q(K) = K^2/4 - c1 (so p' = -q), and
the splitting-curvature coefficient against the flat isotropy section is
g'(K) with g = q / (p + q^2), which expands to

    g'(K) = (q' (p - q^2) + q^2) / (p + q^2)^2,   q' = K/2,

using p' = -q.  Sphere patches substitute a cubic smoothstep for K so the
parameterization closes smoothly at both poles; orbit-bounded cap patches
use a one-sided quadratic substitution at the pole end.
"""

import numpy as np

from ._backend import maybe_njit

__all__ = [
    "ek_p",
    "ek_q",
    "ek_gprime",
    "ek_g",
    "sphere_integrand",
    "cap_integrand",
    "cubic_roots_batch",
]


def _ek_p_impl(K, c1, c2):
    return -K * K * K / 12.0 + c1 * K + c2


def _ek_q_impl(K, c1):
    return 0.25 * K * K - c1


def _ek_g_impl(K, c1, c2):
    q = 0.25 * K * K - c1
    p = -K * K * K / 12.0 + c1 * K + c2
    return q / (p + q * q)


def _ek_gprime_impl(K, c1, c2):
    q = 0.25 * K * K - c1
    p = -K * K * K / 12.0 + c1 * K + c2
    qp = 0.5 * K
    den = p + q * q
    return (qp * (p - q * q) + q * q) / (den * den)


def _sphere_integrand_impl(S, c1, c2, lo, hi):
    # K(s) = lo + (hi - lo) s^2 (3 - 2s): K' vanishes linearly at s = 0, 1,
    # regularizing the simple-root poles at both ends of [lo, hi].
    w = hi - lo
    K = lo + w * S * S * (3.0 - 2.0 * S)
    dK = 6.0 * w * S * (1.0 - S)
    q = 0.25 * K * K - c1
    p = -K * K * K / 12.0 + c1 * K + c2
    qp = 0.5 * K
    den = p + q * q
    return (qp * (p - q * q) + q * q) / (den * den) * dK


def _cap_integrand_impl(S, c1, c2, k0, root):
    # K(s) = root - (root - k0)(1 - s)^2: one-sided regularization at the
    # pole end s = 1; s = 0 sits on the boundary orbit K = k0.
    w = root - k0
    one = 1.0 - S
    K = root - w * one * one
    dK = 2.0 * w * one
    q = 0.25 * K * K - c1
    p = -K * K * K / 12.0 + c1 * K + c2
    qp = 0.5 * K
    den = p + q * q
    return (qp * (p - q * q) + q * q) / (den * den) * dK


def _cubic_roots_batch_impl(c1, c2):
    """Roots of -K^3/12 + c1 K + c2 for arrays with 16 c1^3 > 9 c2^2.

    Trigonometric method for the three-real-root case; returns an array of
    shape (len, 3) with roots in increasing order.  Only valid where the
    discriminant is positive (callers handle the other branches).
    """
    # depressed form K^3 + P K + Q with P = -12 c1, Q = -12 c2
    P = -12.0 * c1
    Q = -12.0 * c2
    m = 2.0 * np.sqrt(-P / 3.0)
    arg = 3.0 * Q / (P * m)
    arg = np.minimum(1.0, np.maximum(-1.0, arg))
    acos = np.arccos(arg)
    out = np.empty(c1.shape + (3,))
    out[..., 0] = m * np.cos(acos / 3.0 - 4.0 * np.pi / 3.0)
    out[..., 1] = m * np.cos(acos / 3.0 - 2.0 * np.pi / 3.0)
    out[..., 2] = m * np.cos(acos / 3.0)
    return out


ek_p = maybe_njit(cache=True)(_ek_p_impl)
ek_q = maybe_njit(cache=True)(_ek_q_impl)
ek_g = maybe_njit(cache=True)(_ek_g_impl)
ek_gprime = maybe_njit(cache=True)(_ek_gprime_impl)
sphere_integrand = maybe_njit(cache=True)(_sphere_integrand_impl)
cap_integrand = maybe_njit(cache=True)(_cap_integrand_impl)
cubic_roots_batch = maybe_njit(cache=True)(_cubic_roots_batch_impl)

# plain-python references for the benchmark harness
PYTHON_IMPLS = {
    "ek_gprime": _ek_gprime_impl,
    "sphere_integrand": _sphere_integrand_impl,
    "cap_integrand": _cap_integrand_impl,
    "cubic_roots_batch": _cubic_roots_batch_impl,
}
JITTED_IMPLS = {
    "ek_gprime": ek_gprime,
    "sphere_integrand": sphere_integrand,
    "cap_integrand": cap_integrand,
    "cubic_roots_batch": cubic_roots_batch,
}
