"""Structure-equation verification and geometric-type classification.

A canonical-form model (G, X, c, R, F) defines a Lie algebroid iff

  (1) g is a Lie algebra (Jacobi identity for the structure constants),
  (2) the g-bracket is realized by the matrix commutator on R^n,
  (3) c and R are infinitesimally g-equivariant,
  (4) the two Bianchi identities hold:
        cyc{ F(u).c(v,w) + c(c(u,v), w) } = cyc{ R(u,v) w }        (Bianchi 1)
        cyc{ F(u).R(v,w) + R(c(u,v), w) } = 0                      (Bianchi 2)

where cyc denotes the cyclic sum over (u, v, w) and F(u).T is the derivative
of the tensor T along the vector field F(.)(u).  ``check_jacobi`` evaluates
the Jacobiator of the extended (Leibniz) bracket directly, which vanishes
precisely when (1)-(4) do; ``jacobi_conditions`` evaluates the four
conditions separately so the two routes can be compared.

Equivariance is tested both at finite group elements (conjugation through
the group action on the base) and infinitesimally.  The infinitesimal form
of the equivariance of a tensor includes the action on the *target*: e.g.
for the curvature,

    D_{psi(alpha)} R(u,v) - R(alpha u, v) - R(u, alpha v) + [alpha, R(u,v)]_g = 0.

The finite test is authoritative; the infinitesimal one is its derivative
at the identity.

Conditions (1)-(4) are exactly the Jacobi identity on *constant* sections.
Extending to all sections through the Leibniz rule requires one more
identity, the anchor-bracket compatibility

    rho([xi1, xi2]) = [rho(xi1), rho(xi2)],

which on canonical-form data amounts to the F-compatibility

    D_{F(u)}F(v) - D_{F(v)}F(u) = F(c(u,v)) + psi(R(u,v)).

This condition is *not* implied by (1)-(4) in low dimension: on a model
with n = 2 and c = 0 every cyclic sum in (4) is an alternating 3-linear
map on R^2 and vanishes identically, so scaling R preserves (1)-(4) while
breaking the anchor compatibility.  ``check_anchor_morphism`` tests it
directly.
"""

from dataclasses import dataclass, field

import numpy as np

from .algebra import directional_derivative
from .errors import DimensionError

__all__ = [
    "check_anchor_morphism",
    "check_bianchi",
    "check_jacobi",
    "jacobi_conditions",
    "check_equivariance",
    "classify_type",
    "GeometricType",
    "standard_complex_structure",
    "is_metric_type",
]


def _cyclic(u, v, w):
    yield u, v, w
    yield v, w, u
    yield w, u, v


def check_bianchi(model, x, u, v, w, h=1e-5):
    """Residuals (res1, res2) of the two Bianchi identities at x.

    ``res1`` lives in R^n, ``res2`` in g-coefficients; both vanish for
    valid models.
    """
    x = np.asarray(x, dtype=float)
    u, v, w = (np.asarray(a, dtype=float) for a in (u, v, w))
    res1 = np.zeros(model.n)
    res2 = np.zeros(model.group.dim)
    for a, b, cc in _cyclic(u, v, w):
        Fa = np.asarray(model.F(x, a), dtype=float)
        res1 += directional_derivative(lambda y: np.asarray(model.c(y, b, cc), float),
                                       x, Fa, h)
        res1 += np.asarray(model.c(x, np.asarray(model.c(x, a, b), float), cc), float)
        res1 -= model.group.matrix(np.asarray(model.R(x, a, b), float)) @ cc
        res2 += directional_derivative(lambda y: np.asarray(model.R(y, b, cc), float),
                                       x, Fa, h)
        res2 += np.asarray(model.R(x, np.asarray(model.c(x, a, b), float), cc), float)
    return res1, res2


def check_anchor_morphism(model, x, xi1, xi2, h=1e-5):
    """Residual of rho([xi1, xi2]) - [rho(xi1), rho(xi2)] at x.

    The xi are constant sections (fiber vectors).  The vector-field
    commutator on the right is computed by Richardson-checked central
    differences of the anchor fields.  Returns a tangent vector in R^d
    that vanishes (to discretization error) iff the anchor is a bracket
    morphism on this pair — on canonical-form data, the F-compatibility
    condition coupling F to c and R.
    """
    x = np.asarray(x, dtype=float)
    xi1 = np.asarray(xi1, dtype=float)
    xi2 = np.asarray(xi2, dtype=float)
    if model.d == 0:
        return np.zeros(0)
    lhs = model.anchor(x, model.bracket_constant(x, xi1, xi2))
    v1 = model.anchor(x, xi1)
    v2 = model.anchor(x, xi2)
    commutator = (directional_derivative(lambda y: model.anchor(y, xi2), x, v1, h)
                  - directional_derivative(lambda y: model.anchor(y, xi1), x, v2, h))
    return lhs - commutator


def check_jacobi(model, x, xi1, xi2, xi3, h=1e-5):
    """Jacobiator [[xi1,xi2],xi3] + [[xi2,xi3],xi1] + [[xi3,xi1],xi2] at x.

    The xi are constant sections (fiber vectors); the inner brackets are
    genuine sections of the algebroid, so the outer bracket runs through the
    Leibniz extension with finite differences of step ``h``.  Returns a
    fiber vector that vanishes (to discretization error) iff the model
    satisfies the algebroid structure equations at x.
    """
    x = np.asarray(x, dtype=float)
    fibers = [np.asarray(z, dtype=float) for z in (xi1, xi2, xi3)]
    total = np.zeros(model.fiber_dim)
    for a, b, cc in _cyclic(*fibers):
        def inner(y, a=a, b=b):
            return model.bracket_constant(y, a, b)

        def outer_const(y, cc=cc):
            return cc

        total += model.bracket_sections(inner, outer_const, x, h=h)
    return total


def jacobi_conditions(model, x, xi1, xi2, xi3, h=1e-5):
    """The four structure conditions evaluated on the same data as
    :func:`check_jacobi`; returns a dict of residual norms."""
    x = np.asarray(x, dtype=float)
    g = model.group
    us = [model.theta(np.asarray(z, float)) for z in (xi1, xi2, xi3)]
    als = [model.omega(np.asarray(z, float)) for z in (xi1, xi2, xi3)]

    # (1) Jacobi identity of g in coefficients
    jac_g = 0.0
    for a, b, cc in _cyclic(*als):
        jac_g = max(jac_g, float(np.linalg.norm(
            g.bracket(g.bracket(a, b), cc)
            + g.bracket(g.bracket(b, cc), a)
            + g.bracket(g.bracket(cc, a), b))))

    # (2) coefficient bracket realized by the matrix commutator
    rep = 0.0
    for a, b in ((als[0], als[1]), (als[1], als[2]), (als[2], als[0])):
        A, B = g.matrix(a), g.matrix(b)
        rep = max(rep, float(np.linalg.norm(
            g.matrix(g.bracket(a, b)) - (A @ B - B @ A))))

    # (3) infinitesimal equivariance of c and R for each alpha against each
    # (u, v) pair drawn from the triple
    equiv = 0.0
    pairs = [(us[0], us[1]), (us[1], us[2]), (us[2], us[0])]
    for al in als:
        for u, v in pairs:
            r = check_equivariance(model, x, al, u, v, h=h, finite=False)
            equiv = max(equiv, r["max_infinitesimal"])

    # (4) Bianchi identities
    res1, res2 = check_bianchi(model, x, us[0], us[1], us[2], h=h)
    bianchi = max(float(np.linalg.norm(res1)), float(np.linalg.norm(res2)))

    return {
        "g_jacobi": jac_g,
        "representation": rep,
        "equivariance": equiv,
        "bianchi": bianchi,
    }


def check_equivariance(model, x, alpha, u, v=None, h=1e-5, t=1.0,
                       finite=True, infinitesimal=True):
    """Equivariance residuals of c, R, F under the g-action.

    ``alpha`` is a g-coefficient vector, ``u`` (and optionally ``v``) fiber
    R^n vectors.  The finite test conjugates by g = exp(t alpha) using the
    base action; the infinitesimal test differentiates along psi(alpha).
    Returns a dict with per-map residual norms and the two maxima.
    """
    x = np.asarray(x, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    u = np.asarray(u, dtype=float)
    v = u[::-1].copy() if v is None else np.asarray(v, dtype=float)
    g = model.group
    A = g.matrix(alpha)
    out = {"finite": {}, "infinitesimal": {}}

    cx = np.asarray(model.c(x, u, v), dtype=float)
    Rx = np.asarray(model.R(x, u, v), dtype=float)

    if finite:
        y = model.base.act(x, alpha, t)
        G = g.exp(alpha, t)
        Ginv = g.exp(alpha, -t)
        gu, gv = Ginv @ u, Ginv @ v
        res_c = np.asarray(model.c(y, gu, gv), float) - Ginv @ cx
        ad = Ginv @ g.matrix(Rx) @ G
        res_R = np.asarray(model.R(y, gu, gv), float) - g.coefficients(ad)
        if model.d:
            dr = model.base.act_jacobian(x, alpha, t)
            res_F = np.asarray(model.F(y, gu), float) - dr @ np.asarray(
                model.F(x, u), float)
        else:
            res_F = np.zeros(0)
        out["finite"] = {
            "c": float(np.linalg.norm(res_c)),
            "R": float(np.linalg.norm(res_R)),
            "F": float(np.linalg.norm(res_F)),
        }

    if infinitesimal:
        if model.d:
            w_psi = model.base.psi(x, alpha)
            dc = directional_derivative(
                lambda y: np.asarray(model.c(y, u, v), float), x, w_psi, h)
            dR = directional_derivative(
                lambda y: np.asarray(model.R(y, u, v), float), x, w_psi, h)
            Fu = np.asarray(model.F(x, u), float)
            dF = (directional_derivative(
                      lambda y: np.asarray(model.F(y, u), float), x, w_psi, h)
                  - directional_derivative(
                      lambda y: model.base.psi(y, alpha), x, Fu, h))
        else:
            dc = np.zeros(model.n)
            dR = np.zeros(g.dim)
            dF = np.zeros(0)
        res_c = (dc - np.asarray(model.c(x, A @ u, v), float)
                 - np.asarray(model.c(x, u, A @ v), float) + A @ cx)
        res_R = (dR - np.asarray(model.R(x, A @ u, v), float)
                 - np.asarray(model.R(x, u, A @ v), float)
                 + g.bracket(alpha, Rx))
        res_F = dF - (np.asarray(model.F(x, A @ u), float) if model.d
                      else np.zeros(0))
        out["infinitesimal"] = {
            "c": float(np.linalg.norm(res_c)),
            "R": float(np.linalg.norm(res_R)),
            "F": float(np.linalg.norm(res_F)),
        }

    out["max_finite"] = max(out["finite"].values(), default=0.0)
    out["max_infinitesimal"] = max(out["infinitesimal"].values(), default=0.0)
    return out


def standard_complex_structure(n):
    """Block-diagonal J pairing coordinates (x_{2k}, x_{2k+1}) as z_k."""
    if n % 2:
        raise DimensionError("complex structure needs even fiber dimension")
    J = np.zeros((n, n))
    for k in range(0, n, 2):
        J[k, k + 1] = -1.0
        J[k + 1, k] = 1.0
    return J


@dataclass
class GeometricType:
    """Geometric-type flags of a model, with the residuals that earned them."""

    metric: bool = False
    almost_symplectic: bool = False
    symplectic: bool = False
    almost_complex: bool = False
    complex: bool = False
    almost_hermitian: bool = False
    kahler: bool = False
    residuals: dict = field(default_factory=dict)

    def as_dict(self):
        return {
            "metric": self.metric,
            "almost_symplectic": self.almost_symplectic,
            "symplectic": self.symplectic,
            "almost_complex": self.almost_complex,
            "complex": self.complex,
            "almost_hermitian": self.almost_hermitian,
            "kahler": self.kahler,
        }


def _sample_points(model, rng, samples, scale=1.5):
    if model.d == 0:
        return [np.zeros(0)] * max(1, min(samples, 3))
    pts = []
    while len(pts) < samples:
        x = scale * rng.standard_normal(model.d)
        if model.base.contains(x):
            pts.append(x)
    return pts


def classify_type(model, samples=20, tol=1e-10, seed=0):
    """Classify the geometric type of the model's realizations.

    Algebra-membership flags (orthogonal / symplectic / complex-linear /
    unitary) are exact linear-algebra checks on the structure algebra basis;
    torsion conditions (c = 0, the symplectic cyclic condition, the
    Nijenhuis condition) are sampled at ``samples`` random points and fiber
    vectors.  Returns a :class:`GeometricType`.
    """
    rng = np.random.default_rng(seed)
    g = model.group
    n = model.n
    res = {}

    res["so"] = max((float(np.linalg.norm(B + B.T)) for B in g.basis),
                    default=0.0)
    in_so = res["so"] <= tol

    even = n % 2 == 0
    if even:
        J = standard_complex_structure(n)
        res["sp"] = max((float(np.linalg.norm(B.T @ J + J @ B)) for B in g.basis),
                        default=0.0)
        res["glc"] = max((float(np.linalg.norm(B @ J - J @ B)) for B in g.basis),
                         default=0.0)
        in_sp = res["sp"] <= tol
        in_glc = res["glc"] <= tol
    else:
        in_sp = in_glc = False

    pts = _sample_points(model, rng, samples)
    c_max = 0.0
    cyc_max = 0.0
    nij_max = 0.0
    for x in pts:
        for _ in range(3):
            u = rng.standard_normal(n)
            v = rng.standard_normal(n)
            w = rng.standard_normal(n)
            cuv = np.asarray(model.c(x, u, v), dtype=float)
            c_max = max(c_max, float(np.linalg.norm(cuv)))
            if even:
                # cyclic sum of Omega(c(u,v), w) with Omega(a, b) = <J a, b>
                s = 0.0
                for a, b, cc in _cyclic(u, v, w):
                    cab = np.asarray(model.c(x, a, b), dtype=float)
                    s += float((J @ cab) @ cc)
                cyc_max = max(cyc_max, abs(s))
                nij = (-np.asarray(model.c(x, J @ u, J @ v), float)
                       + J @ np.asarray(model.c(x, J @ u, v), float)
                       + J @ np.asarray(model.c(x, u, J @ v), float)
                       + cuv)
                nij_max = max(nij_max, float(np.linalg.norm(nij)))
    res["torsion"] = c_max
    res["symplectic_cyclic"] = cyc_max
    res["nijenhuis"] = nij_max
    torsionless = c_max <= tol

    gt = GeometricType(residuals=res)
    gt.metric = in_so and torsionless
    gt.almost_symplectic = in_sp
    gt.symplectic = in_sp and cyc_max <= tol
    gt.almost_complex = in_glc
    gt.complex = in_glc and nij_max <= tol
    gt.almost_hermitian = in_so and in_sp and in_glc
    gt.kahler = gt.almost_hermitian and torsionless
    return gt


def is_metric_type(model, samples=10, tol=1e-10, seed=0):
    """True when the structure group is orthogonal and torsion vanishes."""
    gt = classify_type(model, samples=samples, tol=tol, seed=seed)
    return gt.metric
