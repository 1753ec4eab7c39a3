"""Orbit foliation of the base: ranks, isotropy, flows, invariants.

The anchor image rho_x(R^n + g) is the tangent space of the leaf through x;
its dimension is the leaf dimension, and ker rho_x is the isotropy Lie
algebra of the transitive algebroid over that leaf.  Rank decisions use the
singular values of the anchor matrix with the relative threshold
``1e-9 * max(sigma_max, 1)``.
"""

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DomainError, FlowError

__all__ = [
    "RANK_TOL",
    "anchor_svd",
    "leaf_rank",
    "isotropy_basis",
    "LeafProbe",
    "probe",
    "flow",
    "FlowResult",
    "check_invariant",
]

RANK_TOL = 1e-9


def anchor_svd(model, x):
    mat = model.anchor_matrix(x)
    if mat.shape[0] == 0:
        return mat, np.zeros(0), np.eye(model.fiber_dim)
    u, s, vh = np.linalg.svd(mat)
    return mat, s, vh


def _rank_from_singulars(s, tol=RANK_TOL):
    if s.size == 0:
        return 0
    thr = tol * max(float(s[0]), 1.0)
    return int(np.sum(s > thr))


def leaf_rank(model, x, tol=RANK_TOL):
    """dim of the leaf through x = rank of the anchor at x."""
    _, s, _ = anchor_svd(model, np.asarray(x, dtype=float))
    return _rank_from_singulars(s, tol)


def isotropy_basis(model, x, tol=RANK_TOL):
    """Orthonormal basis of ker rho_x as rows of an array (k, n + dim g)."""
    _, s, vh = anchor_svd(model, np.asarray(x, dtype=float))
    rank = _rank_from_singulars(s, tol)
    return vh[rank:].copy()


@dataclass
class LeafProbe:
    """Pointwise foliation data: leaf dimension, isotropy, orbit rank."""

    x: np.ndarray
    leaf_dim: int
    isotropy_dim: int
    orbit_dim: int
    kernel: np.ndarray  # rows: orthonormal basis of ker rho_x

    def as_dict(self):
        return {
            "point": [float(v) for v in self.x],
            "leaf_dim": self.leaf_dim,
            "isotropy_dim": self.isotropy_dim,
            "orbit_dim": self.orbit_dim,
        }


def probe(model, x, tol=RANK_TOL):
    x = np.asarray(x, dtype=float)
    mat, s, vh = anchor_svd(model, x)
    rank = _rank_from_singulars(s, tol)
    kernel = vh[rank:].copy()
    # rank of the group-direction block alone = dim of the G-orbit at x
    if model.group.dim and model.d:
        svals = np.linalg.svd(mat[:, model.n:], compute_uv=False)
        orbit = _rank_from_singulars(svals, tol)
    else:
        orbit = 0
    return LeafProbe(x=x, leaf_dim=rank, isotropy_dim=kernel.shape[0],
                     orbit_dim=orbit, kernel=kernel)


@dataclass
class FlowResult:
    t: np.ndarray
    points: np.ndarray  # shape (len(t), d)

    @property
    def end(self):
        return self.points[-1]


def _as_section(model, section):
    if callable(section):
        return section
    fiber = np.asarray(section, dtype=float)
    if fiber.shape != (model.fiber_dim,):
        raise DomainError(
            f"constant section must be a fiber vector of length {model.fiber_dim}")
    return lambda x: fiber


def flow(model, x0, section, t_final, rtol=1e-10, atol=1e-12, n_eval=101):
    """Integrate the anchor vector field of a section from x0.

    ``section`` is a fiber vector (constant section) or a callable
    x -> fiber vector.  Uses an adaptive Runge-Kutta scheme at ``rtol``;
    raises :class:`FlowError` if the integrator stalls and
    :class:`DomainError` if the path leaves the model domain.
    """
    x0 = np.asarray(x0, dtype=float)
    if not model.base.contains(x0):
        raise DomainError(f"initial point {x0} outside the model domain")
    if model.d == 0:
        t = np.linspace(0.0, t_final, n_eval)
        return FlowResult(t=t, points=np.zeros((n_eval, 0)))
    sec = _as_section(model, section)

    def rhs(t, y):
        return model.anchor(y, np.asarray(sec(y), dtype=float))

    t_eval = np.linspace(0.0, t_final, n_eval)
    sol = solve_ivp(rhs, (0.0, t_final), x0, method="RK45",
                    rtol=rtol, atol=atol, t_eval=t_eval, dense_output=False)
    if not sol.success:
        raise FlowError(f"flow integration failed: {sol.message}")
    pts = sol.y.T
    for row in pts:
        if not model.base.contains(row):
            raise DomainError("flow left the model domain")
    return FlowResult(t=sol.t, points=pts)


def check_invariant(model, f, points, grad=None, h=1e-6):
    """Max |df(rho(e_j))| over sample points and the standard fiber basis.

    Zero (to tolerance) iff f is constant along the foliation through the
    sampled points.  ``grad`` may supply an exact gradient; otherwise f is
    differentiated by central differences with step ``h``.
    """
    worst = 0.0
    for x in points:
        x = np.asarray(x, dtype=float)
        if grad is not None:
            gf = np.asarray(grad(x), dtype=float)
        else:
            gf = np.empty(model.d)
            for i in range(model.d):
                e = np.zeros(model.d)
                e[i] = 1.0
                gf[i] = (f(x + h * e) - f(x - h * e)) / (2.0 * h)
        mat = model.anchor_matrix(x)
        if mat.size:
            worst = max(worst, float(np.max(np.abs(gf @ mat))))
    return worst
