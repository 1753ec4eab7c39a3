"""Splittings, curvature 2-forms, periods, and (G-)monodromy groups.

Over a leaf L the anchor is onto TL; a splitting sigma: TL -> A|_L inverts
it on the metric-orthogonal complement of ker rho.  Its curvature

    Omega_sigma(v, w) = [sigma(v), sigma(w)] - sigma([v, w])

takes values in the isotropy ker rho|_L, and when the isotropy is abelian
(or the curvature is otherwise central) the periods of Omega_sigma against
a flat isotropy frame generate the monodromy group N of the transitive
algebroid A|_L: spheres contribute their total curvature, and orbit-bounded
disks extend N to the G-monodromy group N^G.  Discreteness of N^G is the
integrability obstruction, and for two generators it reduces to rationality
of their ratio.  (The sign convention makes the disk periods of the
positively-oriented sphere caps positive; the groups themselves are
symmetric sets, so only internal consistency matters.)

Patches parameterize pieces of leaves by rectangles; their coordinate
fields commute, so

    Omega_sigma(d/ds, d/dt) = [sigma(d/ds), sigma(d/dt)]

with the bracket evaluated through the Leibniz rule in patch coordinates.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import directional_derivative
from .errors import CentralityError, SingularityError
from .quadrature import adaptive_quad2d
from .rationality import (
    DENOMINATOR_BOUND,
    RESIDUAL_TOL,
    RationalityVerdict,
    detect_rational,
)

__all__ = [
    "default_fiber_metric",
    "Splitting",
    "DiskPatch",
    "splitting_curvature",
    "splitting_curvature_at",
    "period",
    "PeriodResult",
    "MonodromyProblem",
    "MonodromyReport",
    "g_monodromy",
]


def default_fiber_metric(model):
    """Block metric <(u,a),(v,b)> = u.v - 1/2 tr(AB) on the fiber.

    Falls back to the identity when the algebra pairing is not positive
    definite (non-compact structure groups).
    """
    m = np.eye(model.fiber_dim)
    gram = model.group.gram
    if gram.size:
        eig = np.linalg.eigvalsh(gram)
        if eig.min() > 1e-12:
            m[model.n:, model.n:] = gram
    return m


class Splitting:
    """Minimum-norm right inverse of the anchor w.r.t. a fiber metric.

    ``sigma(x, v)`` returns the unique fiber vector xi with rho(xi) = v that
    is metric-orthogonal to ker rho_x; :class:`SingularityError` is raised
    when v is not in the anchor image (rank drop).
    """

    def __init__(self, model, metric=None, rank_tol=1e-9, residual_tol=1e-8):
        self.model = model
        self.metric = default_fiber_metric(model) if metric is None else \
            np.asarray(metric, dtype=float)
        self._minv = np.linalg.inv(self.metric)
        self.rank_tol = rank_tol
        self.residual_tol = residual_tol

    def sigma_matrix(self, x):
        """Matrix of sigma at x, shape (fiber_dim, d)."""
        A = self.model.anchor_matrix(x)
        W = self._minv @ A.T
        G = A @ W
        return W @ np.linalg.pinv(G, rcond=self.rank_tol)

    def sigma(self, x, v):
        x = np.asarray(x, dtype=float)
        v = np.asarray(v, dtype=float)
        xi = self.sigma_matrix(x) @ v
        resid = np.linalg.norm(self.model.anchor(x, xi) - v)
        if resid > self.residual_tol * (1.0 + np.linalg.norm(v)):
            raise SingularityError(
                f"vector not in the anchor image at x={x} (residual {resid:.3e})")
        return xi

    def kernel_projector(self, x):
        """Projector onto ker rho_x along the metric complement."""
        A = self.model.anchor_matrix(x)
        return np.eye(self.model.fiber_dim) - self.sigma_matrix(x) @ A


@dataclass
class DiskPatch:
    """Rectangular parameterization of a piece of a leaf.

    ``param(s, t)`` maps scalars into the base; ``flat_frame(s, t)`` returns
    rows spanning the flat isotropy frame along the patch.  When a closed
    form for the pulled-back curvature coefficients is known,
    ``coefficient(S, T)`` (vectorized over flat arrays) short-circuits the
    numeric path in :func:`period`.
    """

    param: callable
    s_range: tuple = (0.0, 1.0)
    t_range: tuple = (0.0, 1.0)
    flat_frame: callable = None
    coefficient: callable = None
    jacobian: callable = None
    label: str = ""
    boundary: str = ""
    meta: dict = field(default_factory=dict)

    def tangents(self, s, t, h=1e-6):
        """Columns (d gamma/ds, d gamma/dt) at (s, t)."""
        if self.jacobian is not None:
            jac = np.asarray(self.jacobian(s, t), dtype=float)
            return jac[:, 0], jac[:, 1]
        ds = (np.asarray(self.param(s + h, t), float)
              - np.asarray(self.param(s - h, t), float)) / (2.0 * h)
        dt = (np.asarray(self.param(s, t + h), float)
              - np.asarray(self.param(s, t - h), float)) / (2.0 * h)
        return ds, dt

    def subpatch(self, s_range=None, t_range=None):
        """Same patch restricted to a subrectangle (shared coordinates)."""
        return DiskPatch(
            param=self.param,
            s_range=tuple(s_range) if s_range else self.s_range,
            t_range=tuple(t_range) if t_range else self.t_range,
            flat_frame=self.flat_frame,
            coefficient=self.coefficient,
            jacobian=self.jacobian,
            label=self.label,
            boundary=self.boundary,
            meta=dict(self.meta),
        )

    def reversed_orientation(self):
        """Mirror the t coordinate; periods over the result change sign."""
        t0, t1 = self.t_range
        mid = t0 + t1

        def param(s, t):
            return self.param(s, mid - t)

        coeff = None
        if self.coefficient is not None:
            def coeff(S, T):
                return -np.asarray(self.coefficient(S, mid - T))

        jac = None
        if self.jacobian is not None:
            def jac(s, t):
                j = np.asarray(self.jacobian(s, mid - t), dtype=float)
                return np.column_stack([j[:, 0], -j[:, 1]])

        frame = None
        if self.flat_frame is not None:
            def frame(s, t):
                return self.flat_frame(s, mid - t)

        return DiskPatch(param=param, s_range=self.s_range,
                         t_range=self.t_range, flat_frame=frame,
                         coefficient=coeff, jacobian=jac,
                         label=self.label + " (reversed)",
                         boundary=self.boundary, meta=dict(self.meta))


def splitting_curvature(model, splitting, patch, s, t, h=1e-3):
    """Omega_sigma(d/ds, d/dt) at patch coordinates (s, t), as a fiber vector.

    Patch coordinate fields commute, so the curvature reduces to the
    bracket of the two sigma-lifted fields, evaluated by the Leibniz rule
    with derivatives taken in (s, t).
    """

    def lift_s(sv, tv):
        vs, _ = patch.tangents(sv, tv)
        return splitting.sigma(patch.param(sv, tv), vs)

    def lift_t(sv, tv):
        _, vt = patch.tangents(sv, tv)
        return splitting.sigma(patch.param(sv, tv), vt)

    x = np.asarray(patch.param(s, t), dtype=float)
    fs = lift_s(s, t)
    ft = lift_t(s, t)
    core = model.bracket_constant(x, fs, ft)
    d_s_ft = directional_derivative(lambda z: lift_t(z[0], t),
                                    np.array([s]), np.array([1.0]), h)
    d_t_fs = directional_derivative(lambda z: lift_s(s, z[0]),
                                    np.array([t]), np.array([1.0]), h)
    return core + d_s_ft - d_t_fs


def splitting_curvature_at(model, splitting, patch, s, t, v, w, h=1e-3):
    """Omega_sigma(v, w) for arbitrary tangent vectors v, w at patch (s, t).

    v and w are expressed in the patch coordinate frame (least squares; a
    rank-deficient frame raises :class:`SingularityError`), then bilinearity
    reduces to the coordinate-field value.
    """
    gs, gt = patch.tangents(s, t)
    frame = np.column_stack([gs, gt])
    if np.linalg.matrix_rank(frame, tol=1e-12) < 2:
        raise SingularityError(
            f"patch frame is rank-deficient at (s={s}, t={t})")
    coef, res, _, _ = np.linalg.lstsq(frame, np.column_stack([v, w]),
                                      rcond=None)
    recon = frame @ coef
    err = np.linalg.norm(recon - np.column_stack([v, w]))
    if err > 1e-8 * (1.0 + np.linalg.norm([v, w])):
        raise SingularityError("vectors are not tangent to the patch")
    a1, b1 = coef[0, 0], coef[1, 0]
    a2, b2 = coef[0, 1], coef[1, 1]
    omega = splitting_curvature(model, splitting, patch, s, t, h)
    return (a1 * b2 - b1 * a2) * omega


@dataclass
class PeriodResult:
    value: np.ndarray
    error: float
    panels: int
    converged: bool

    @property
    def scalar(self):
        return float(self.value[0])


def _frame_coefficients(model, splitting, patch, omega, s, t, tol=1e-6):
    frame = np.asarray(patch.flat_frame(s, t), dtype=float)
    if frame.ndim == 1:
        frame = frame[None, :]
    M = splitting.metric
    gram = frame @ M @ frame.T
    rhs = frame @ M @ omega
    coeffs = np.linalg.solve(gram, rhs)
    resid = np.linalg.norm(omega - frame.T @ coeffs)
    if resid > tol * (1.0 + np.linalg.norm(omega)):
        raise CentralityError(
            f"curvature leaves the flat-frame span at (s={s:.4g}, t={t:.4g}) "
            f"(residual {resid:.3e}); periods against this frame are undefined")
    return coeffs


def _check_central(model, patch, splitting, s, t, h, tol=1e-6):
    omega = splitting_curvature(model, splitting, patch, s, t, h)
    frame = np.asarray(patch.flat_frame(s, t), dtype=float)
    if frame.ndim == 1:
        frame = frame[None, :]
    x = np.asarray(patch.param(s, t), dtype=float)
    scale = 1.0 + np.linalg.norm(omega)
    for row in frame:
        b = model.bracket_constant(x, omega, row)
        if np.linalg.norm(b) > tol * scale * (1.0 + np.linalg.norm(row)):
            raise CentralityError(
                "curvature does not commute with the isotropy frame; "
                "monodromy periods are not defined for this splitting")


def period(model, splitting, patch, rel_tol=1e-10, abs_tol=1e-14,
           order=7, h=1e-3, max_panels=20000, check_centrality=True):
    """Integral of the curvature coefficients over the patch.

    Uses the patch's closed-form ``coefficient`` when present; otherwise
    evaluates :func:`splitting_curvature` pointwise and projects it onto the
    flat frame with the splitting metric.  Returns a :class:`PeriodResult`
    with one component per frame element.
    """
    if patch.coefficient is not None:
        integrand = patch.coefficient
    else:
        if patch.flat_frame is None:
            raise CentralityError("patch has no flat frame to project on")
        s_mid = 0.5 * (patch.s_range[0] + patch.s_range[1])
        t_mid = 0.5 * (patch.t_range[0] + patch.t_range[1])
        if check_centrality:
            _check_central(model, patch, splitting, s_mid, t_mid, h)

        def integrand(S, T):
            out = []
            for sv, tv in zip(np.atleast_1d(S), np.atleast_1d(T)):
                omega = splitting_curvature(model, splitting, patch,
                                            float(sv), float(tv), h)
                out.append(_frame_coefficients(model, splitting, patch,
                                               omega, float(sv), float(tv)))
            return np.asarray(out)

    q = adaptive_quad2d(integrand, patch.s_range, patch.t_range,
                        rel_tol=rel_tol, abs_tol=abs_tol, order=order,
                        max_panels=max_panels)
    return PeriodResult(value=np.atleast_1d(q.value), error=q.error,
                        panels=q.panels, converged=q.converged)


@dataclass
class MonodromyProblem:
    """Everything g_monodromy needs about one leaf.

    ``sphere_patches`` integrate to monodromy generators (closed surfaces);
    ``disk_patches`` are orbit-bounded disks contributing the extra
    G-monodromy generators.  ``trivial`` marks leaves with vanishing pi_2
    (no generators at all); ``locally_free`` reports whether the structure
    group acts locally freely on the boundary orbits (when it does not, the
    G-monodromy method is inconclusive).
    """

    model: object
    leaf_label: str
    kind: str
    sphere_patches: list = field(default_factory=list)
    disk_patches: list = field(default_factory=list)
    splitting: Splitting = None
    trivial: bool = False
    locally_free: bool = True
    meta: dict = field(default_factory=dict)


@dataclass
class MonodromyReport:
    leaf: str
    kind: str
    monodromy_generators: list
    g_generators: list
    discrete: str            # "discrete" | "not_discrete" | "undecided"
    integrable: str          # "integrable" | "not_integrable" | "undecided"
    rationality: RationalityVerdict | None
    ratio: float | None
    quadrature: dict
    tolerances: dict

    def as_dict(self):
        return {
            "leaf": self.leaf,
            "kind": self.kind,
            "monodromy_generators": self.monodromy_generators,
            "g_monodromy_generators": self.g_generators,
            "discrete": self.discrete,
            "integrable": self.integrable,
            "ratio": self.ratio,
            "rationality": self.rationality.as_dict() if self.rationality else None,
            "quadrature": self.quadrature,
            "tolerances": self.tolerances,
        }


def g_monodromy(problem, rel_tol=None, abs_tol=None, order=11,
                bound=DENOMINATOR_BOUND, rational_tol=RESIDUAL_TOL,
                generator_tol=1e-9):
    """Compute the G-monodromy group data of a leaf and decide discreteness.

    Periods are integrated patch by patch; the report carries the monodromy
    generators (sphere periods), the G-monodromy generators (disk periods),
    the generator ratio with its rationality verdict, and the three-valued
    discreteness/integrability conclusions.

    Quadrature tolerances default per integrand: closed-form coefficients
    are pushed to 1e-13, while finite-difference curvature carries ~1e-8
    stencil noise, so patches without a coefficient get 3e-7 (tighter
    requests would only exhaust the panel budget).
    """
    patches = list(problem.sphere_patches) + list(problem.disk_patches)
    numeric = any(p.coefficient is None for p in patches)
    if rel_tol is None:
        rel_tol = 3e-7 if numeric else 1e-13
    if abs_tol is None:
        abs_tol = 1e-9 if numeric else 1e-15
    tolerances = {
        "quad_rel_tol": rel_tol,
        "quad_abs_tol": abs_tol,
        "denominator_bound": bound,
        "rational_residual_tol": rational_tol,
    }
    quad_info = {"panels": 0, "error": 0.0, "converged": True}

    if problem.trivial:
        return MonodromyReport(
            leaf=problem.leaf_label, kind=problem.kind,
            monodromy_generators=[], g_generators=[],
            discrete="discrete", integrable="integrable",
            rationality=None, ratio=None,
            quadrature=quad_info, tolerances=tolerances)

    def run(patch):
        res = period(problem.model, problem.splitting, patch,
                     rel_tol=rel_tol, abs_tol=abs_tol, order=order)
        quad_info["panels"] += res.panels
        quad_info["error"] += res.error
        quad_info["converged"] = quad_info["converged"] and res.converged
        return res.scalar, float(res.error)

    sphere_runs = [run(p) for p in problem.sphere_patches]
    disk_runs = [run(p) for p in problem.disk_patches]
    sphere = [v for v, _ in sphere_runs]
    disks = [v for v, _ in disk_runs]

    if not problem.locally_free:
        return MonodromyReport(
            leaf=problem.leaf_label, kind=problem.kind,
            monodromy_generators=sphere, g_generators=disks,
            discrete="undecided", integrable="undecided",
            rationality=None, ratio=None,
            quadrature=quad_info, tolerances=tolerances)

    # the G-monodromy group is generated by the disk periods when orbits
    # bound disks (sphere periods are integer combinations of them);
    # otherwise the sphere periods themselves generate
    runs = disk_runs if disk_runs else sphere_runs
    scale = max((abs(g) for g, _ in runs), default=0.0)
    nonzero = [(g, e) for g, e in runs
               if abs(g) > generator_tol * max(1.0, scale)]

    rationality = None
    ratio = None
    if len(nonzero) <= 1:
        discrete = "discrete"
    else:
        ordered = sorted(nonzero, key=lambda ge: abs(ge[0]))
        base, base_err = ordered[-1]
        discrete = "discrete"
        for g, g_err in ordered[:-1]:
            r = g / base
            # quadrature error estimates widen the residual tolerance so a
            # finite-difference run is judged at the accuracy it achieved
            r_err = (g_err + abs(r) * base_err) / abs(base)
            verdict = detect_rational(r, bound=bound,
                                      tol=max(rational_tol, 4.0 * r_err))
            if ratio is None:
                ratio = r
                rationality = verdict
            if not verdict.rational:
                discrete = "not_discrete"
                ratio, rationality = r, verdict
                break

    integrable = "integrable" if discrete == "discrete" else "not_integrable"
    return MonodromyReport(
        leaf=problem.leaf_label, kind=problem.kind,
        monodromy_generators=sphere, g_generators=disks,
        discrete=discrete, integrable=integrable,
        rationality=rationality, ratio=ratio,
        quadrature=quad_info, tolerances=tolerances)
