"""Core algebroid calculus for Cartan realization data in canonical form.

A model consists of a structure group G with Lie algebra g acting on R^n, a
base manifold X carrying an infinitesimal g-action psi, and three structure
maps: torsion c(x): R^n x R^n -> R^n, curvature R(x): R^n x R^n -> g, and a
frame field F(x): R^n -> T_x X.  The associated algebroid is the trivial
bundle A = X x (R^n + g) with anchor

    rho(x)(u, alpha) = F(x)(u) + psi(x)(alpha)

and bracket of *constant* sections

    [(u, alpha), (v, beta)] = (alpha.v - beta.u - c(u, v),
                               [alpha, beta]_g - R(u, v)).

The bracket extends to arbitrary sections by the Leibniz rule; for sections
s1, s2 evaluated at x this reads

    [s1, s2](x) = [s1(x), s2(x)]_const + D_{rho(s1(x))} s2 - D_{rho(s2(x))} s1,

with D a directional derivative of the fiber components.  Directional
derivatives are computed by central differences with Richardson step-halving
both for accuracy (the extrapolated value has O(h^4) truncation error) and to
detect catastrophic cancellation when the step is too small.

g-algebra elements are represented throughout by coefficient vectors over a
fixed matrix basis of g; fiber vectors are stacked as xi = (u, alpha) in
R^(n + dim g).
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from .errors import (
    DimensionError,
    DomainError,
    RepresentationError,
    StepSizeError,
)

__all__ = [
    "StructureGroup",
    "BaseManifold",
    "CartanModel",
    "AlgebroidElement",
    "directional_derivative",
]


def directional_derivative(fun, x, w, h=1e-5, rich_factor=1e3, rich_atol=1e-12):
    """Richardson-extrapolated central difference of ``fun`` at ``x`` along ``w``.

    ``fun`` maps a base point to an ndarray.  Two central differences with
    steps h and h/2 are combined to O(h^4); if the two levels disagree by
    more than ``rich_factor * h^2 * scale + rich_atol`` the step is deemed
    unusable (roundoff noise dominating) and :class:`StepSizeError` is
    raised.
    """
    w = np.asarray(w, dtype=float)
    nrm = np.linalg.norm(w)
    if nrm == 0.0 or w.size == 0:
        return np.zeros_like(np.asarray(fun(x), dtype=float))
    d1 = (np.asarray(fun(x + h * w), dtype=float)
          - np.asarray(fun(x - h * w), dtype=float)) / (2.0 * h)
    hh = 0.5 * h
    d2 = (np.asarray(fun(x + hh * w), dtype=float)
          - np.asarray(fun(x - hh * w), dtype=float)) / (2.0 * hh)
    disagree = np.linalg.norm(d1 - d2)
    scale = max(1.0, float(np.linalg.norm(d2)))
    if disagree > rich_factor * h * h * scale + rich_atol:
        raise StepSizeError(
            f"Richardson levels disagree by {disagree:.3e} at step {h:.3e}; "
            "step too small (or the section is not smooth here)")
    # (4 d2 - d1)/3 cancels the O(h^2) term of the central difference.
    return (4.0 * d2 - d1) / 3.0


class StructureGroup:
    """Connected matrix group G < GL(n, R) given by a basis of its Lie algebra.

    ``basis`` is a sequence of n x n matrices spanning g.  Closure under the
    commutator is verified at construction and the structure constants are
    cached; a basis that is not closed raises :class:`RepresentationError`.
    """

    def __init__(self, name, n, basis, closure_tol=1e-10):
        self.name = name
        self.n = int(n)
        basis = np.asarray(basis, dtype=float)
        if basis.ndim != 3 or basis.shape[1:] != (self.n, self.n):
            raise DimensionError(
                f"algebra basis must have shape (k, {n}, {n}), got {basis.shape}")
        self.basis = basis
        self.dim = basis.shape[0]
        flat = basis.reshape(self.dim, -1)
        # pinv of the flattened basis recovers coefficients by least squares
        self._coeff_proj = np.linalg.pinv(flat).T if self.dim else flat
        self._flat = flat
        self.structure_constants = self._closure(closure_tol)
        # <alpha, beta>_g = -1/2 tr(alpha beta); positive definite for
        # compact groups, used by the canonical fiber metric.
        self.gram = -0.5 * np.einsum("aij,bji->ab", basis, basis) \
            if self.dim else np.zeros((0, 0))

    def _closure(self, tol):
        sc = np.zeros((self.dim, self.dim, self.dim))
        for i in range(self.dim):
            for j in range(i + 1, self.dim):
                comm = self.basis[i] @ self.basis[j] - self.basis[j] @ self.basis[i]
                coeffs = self._project(comm)
                resid = np.linalg.norm(self.matrix(coeffs) - comm)
                if resid > tol * max(1.0, np.linalg.norm(comm)):
                    raise RepresentationError(
                        f"[basis[{i}], basis[{j}]] leaves the span "
                        f"(residual {resid:.3e}); algebra basis is not closed")
                sc[i, j] = coeffs
                sc[j, i] = -coeffs
        return sc

    def _project(self, mat):
        return self._coeff_proj @ np.asarray(mat, dtype=float).ravel()

    def matrix(self, coeffs):
        """Algebra element as an n x n matrix from basis coefficients."""
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.dim,):
            raise DimensionError(
                f"expected {self.dim} algebra coefficients, got shape {coeffs.shape}")
        if self.dim == 0:
            return np.zeros((self.n, self.n))
        return np.tensordot(coeffs, self.basis, axes=1)

    def coefficients(self, mat, tol=1e-9):
        """Coefficients of an algebra element given as a matrix.

        Raises :class:`RepresentationError` if ``mat`` is not in the span of
        the basis (relative residual above ``tol``).
        """
        mat = np.asarray(mat, dtype=float)
        coeffs = self._project(mat)
        resid = np.linalg.norm(self.matrix(coeffs) - mat)
        if resid > tol * max(1.0, np.linalg.norm(mat)):
            raise RepresentationError(
                f"matrix lies outside the structure algebra (residual {resid:.3e})")
        return coeffs

    def bracket(self, a, b):
        """[a, b]_g in coefficients, via cached structure constants."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        return np.einsum("i,j,ijk->k", a, b, self.structure_constants)

    def exp(self, coeffs, t=1.0):
        """Group element exp(t alpha) as an n x n matrix."""
        if self.dim == 0:
            return np.eye(self.n)
        return expm(t * self.matrix(coeffs))

    def sample_algebra(self, rng, scale=1.0):
        return scale * rng.standard_normal(self.dim)

    def sample_group(self, rng, scale=1.0):
        """Random group element exp(alpha) with N(0, scale) coefficients."""
        return self.exp(self.sample_algebra(rng, scale))


class BaseManifold:
    """Open subset of R^d with an infinitesimal g-action.

    Parameters
    ----------
    dim : int
        Coordinate dimension d (0 allowed: a point).
    psi : callable (x, alpha_coeffs) -> ndarray (d,)
        Infinitesimal action of g, linear in the coefficients.
    names : optional coordinate names for reports.
    contains : optional predicate restricting the domain.
    act : optional closed-form finite action (x, alpha_coeffs, t) -> point
        implementing x . exp(t alpha); integrated from psi when missing.
    act_jacobian : optional (x, alpha_coeffs, t) -> (d, d) differential of
        act in x; finite differences of act when missing.
    """

    def __init__(self, dim, psi=None, names=None, contains=None,
                 act=None, act_jacobian=None):
        self.dim = int(dim)
        self.names = tuple(names) if names else tuple(f"x{i}" for i in range(dim))
        self._psi = psi
        self._contains = contains
        self._act = act
        self._act_jacobian = act_jacobian

    def contains(self, x):
        if self._contains is None:
            return True
        return bool(self._contains(np.asarray(x, dtype=float)))

    def psi(self, x, coeffs):
        if self._psi is None or self.dim == 0:
            return np.zeros(self.dim)
        return np.asarray(self._psi(np.asarray(x, dtype=float),
                                    np.asarray(coeffs, dtype=float)), dtype=float)

    def act(self, x, coeffs, t=1.0):
        """Finite right action x . exp(t alpha)."""
        x = np.asarray(x, dtype=float)
        if self.dim == 0:
            return x
        if self._act is not None:
            return np.asarray(self._act(x, np.asarray(coeffs, float), t), dtype=float)
        from scipy.integrate import solve_ivp
        sol = solve_ivp(lambda s, y: self.psi(y, coeffs), (0.0, t), x,
                        method="RK45", rtol=1e-12, atol=1e-12)
        if not sol.success:
            raise DomainError(f"group action flow failed: {sol.message}")
        return sol.y[:, -1]

    def act_jacobian(self, x, coeffs, t=1.0, h=1e-6):
        """Differential d(R_g)_x of the finite action, as a (d, d) matrix."""
        x = np.asarray(x, dtype=float)
        if self.dim == 0:
            return np.zeros((0, 0))
        if self._act_jacobian is not None:
            return np.asarray(self._act_jacobian(x, np.asarray(coeffs, float), t),
                              dtype=float)
        jac = np.empty((self.dim, self.dim))
        for i in range(self.dim):
            e = np.zeros(self.dim)
            e[i] = 1.0
            jac[:, i] = (self.act(x + h * e, coeffs, t)
                         - self.act(x - h * e, coeffs, t)) / (2.0 * h)
        return jac


@dataclass
class AlgebroidElement:
    """Point of A = X x (R^n + g): base point x and fiber (u, alpha)."""

    model: "CartanModel"
    x: np.ndarray
    u: np.ndarray
    alpha: np.ndarray

    @property
    def fiber(self):
        return np.concatenate([self.u, self.alpha])

    def anchor(self):
        return self.model.anchor(self.x, self.fiber)

    def __repr__(self):
        return (f"AlgebroidElement(x={np.array2string(self.x, precision=6)}, "
                f"u={np.array2string(self.u, precision=6)}, "
                f"alpha={np.array2string(self.alpha, precision=6)})")


@dataclass
class CartanModel:
    """Cartan realization data (G, X, c, R, F) in canonical form.

    ``c(x, u, v) -> (n,)``, ``R(x, u, v) -> (dim g,)`` coefficients, and
    ``F(x, u) -> (d,)`` must all be defined on the base domain; c and R are
    expected antisymmetric in (u, v) (checked by the verifier, not here).
    """

    name: str
    group: StructureGroup
    base: BaseManifold
    c: callable
    R: callable
    F: callable
    params: dict = field(default_factory=dict)

    @property
    def n(self):
        return self.group.n

    @property
    def d(self):
        return self.base.dim

    @property
    def fiber_dim(self):
        return self.group.n + self.group.dim

    # -- element helpers ---------------------------------------------------

    def element(self, x, u=None, alpha=None):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.d,):
            raise DimensionError(f"base point must have shape ({self.d},)")
        if not self.base.contains(x):
            raise DomainError(f"point {x} outside the model domain")
        u = np.zeros(self.n) if u is None else np.asarray(u, dtype=float)
        alpha = (np.zeros(self.group.dim) if alpha is None
                 else np.asarray(alpha, dtype=float))
        if u.shape != (self.n,) or alpha.shape != (self.group.dim,):
            raise DimensionError("fiber components have wrong shape")
        return AlgebroidElement(self, x, u, alpha)

    def action_element(self, x, alpha):
        """Image of the canonical g-inclusion: the element (x, 0, alpha)."""
        return self.element(x, None, alpha)

    def split_fiber(self, xi):
        xi = np.asarray(xi, dtype=float)
        if xi.shape != (self.fiber_dim,):
            raise DimensionError(
                f"fiber vector must have shape ({self.fiber_dim},), got {xi.shape}")
        return xi[:self.n], xi[self.n:]

    def theta(self, xi):
        """Tautological projection: the R^n component."""
        return self.split_fiber(xi)[0]

    def omega(self, xi):
        """Connection projection: the g component (coefficients)."""
        return self.split_fiber(xi)[1]

    # -- anchor and brackets -----------------------------------------------

    def anchor(self, x, xi):
        """rho(x)(u, alpha) = F(x)(u) + psi(x)(alpha) in T_x X = R^d."""
        x = np.asarray(x, dtype=float)
        if x.shape != (self.d,):
            raise DimensionError(
                f"base point must have shape ({self.d},), got {x.shape}")
        u, alpha = self.split_fiber(xi)
        return (np.asarray(self.F(x, u), dtype=float)
                + self.base.psi(x, alpha))

    def anchor_matrix(self, x):
        """Matrix of rho(x) on the standard fiber basis, shape (d, n + dim g)."""
        x = np.asarray(x, dtype=float)
        m = self.fiber_dim
        out = np.zeros((self.d, m))
        for j in range(m):
            xi = np.zeros(m)
            xi[j] = 1.0
            out[:, j] = self.anchor(x, xi)
        return out

    def bracket_constant(self, x, xi1, xi2):
        """Bracket of the constant sections through xi1, xi2, evaluated at x."""
        x = np.asarray(x, dtype=float)
        if not self.base.contains(x):
            raise DomainError(f"point {x} outside the model domain")
        u, al = self.split_fiber(xi1)
        v, be = self.split_fiber(xi2)
        A = self.group.matrix(al)
        B = self.group.matrix(be)
        w = A @ v - B @ u - np.asarray(self.c(x, u, v), dtype=float)
        gamma = self.group.bracket(al, be) - np.asarray(self.R(x, u, v), dtype=float)
        return np.concatenate([w, gamma])

    def bracket_sections(self, s1, s2, x, h=1e-5, rich_factor=1e3):
        """Leibniz bracket of two sections at x.

        Sections are callables mapping a base point to a fiber vector of
        length n + dim g.  The derivative terms use Richardson-checked
        central differences with step ``h``; shifted evaluation points must
        stay inside the model domain.
        """
        x = np.asarray(x, dtype=float)
        xi1 = np.asarray(s1(x), dtype=float)
        xi2 = np.asarray(s2(x), dtype=float)
        core = self.bracket_constant(x, xi1, xi2)
        if self.d == 0:
            return core
        w1 = self.anchor(x, xi1)
        w2 = self.anchor(x, xi2)
        for w in (w1, w2):
            nrm = np.linalg.norm(w)
            if nrm > 0.0:
                for pt in (x + h * w, x - h * w):
                    if not self.base.contains(pt):
                        raise DomainError(
                            "finite-difference stencil leaves the model domain")
        term = (directional_derivative(s2, x, w1, h, rich_factor)
                - directional_derivative(s1, x, w2, h, rich_factor))
        return core + term
