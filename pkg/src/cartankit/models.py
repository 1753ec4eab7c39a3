"""Builtin Cartan realization models.

Four families are shipped:

``trivial``
    G = SO(n) over a point, all structure maps zero.  Realizations are flat
    G-structures.

``constant_curvature``
    G = SO(n) over X = R (the curvature value kappa), trivial action, c = 0,
    F = 0 and R(kappa)(u, v) = kappa (u v^T - v u^T).  Realizations are the
    constant-curvature metrics.

``extremal_kahler``
    G = U(1) acting on C = R^2, base X = R^4 with coordinates (K, X, Y, U)
    and T = X + iY.  The data

        c = 0,
        R(K)(z, w)        = -K (z1 w2 - z2 w1)  (coefficient over J = mult by i),
        F(x)(z)           = (-(T zbar + Tbar z), U z, -K/2 (T zbar + Tbar z)),
        psi(x)(i lambda)  = lambda (0, Y, -X, 0),

    encodes the structure equations of an extremal Kahler metric on a
    complex surface with nowhere-vanishing scalar-curvature gradient: K is
    the scalar curvature, T the transvection parameter and U the norm
    datum.  Realizations correspond to such metrics; the functions
    I1 = K^2/4 - U and I2 = X^2 + Y^2 + K U - K^3/6 are Casimirs whose
    joint level sets (c1, c2) carry the leaf foliation.

``ek_su21``
    The same algebroid presented as a Poisson transversal inside su(2,1)*,
    coordinates (a, b, u1, u2).  The change of variables

        K = 3b/2,  X = 3 u2/4,  Y = -3 u1/4,  U = 3 (4 - 8a + 9 b^2)/64

    is an isomorphism onto the extremal_kahler model (tests check the
    anchors intertwine through its Jacobian).
"""

import numpy as np

from .algebra import BaseManifold, CartanModel, StructureGroup
from .errors import UnknownModelError

__all__ = [
    "builtin_model",
    "circle_group",
    "orthogonal_group",
    "scale_curvature",
    "BUILTIN_MODELS",
]

# complex structure on R^2: multiplication by i
J2 = np.array([[0.0, -1.0], [1.0, 0.0]])


def circle_group():
    """U(1) acting on R^2 = C, algebra basis {J}."""
    return StructureGroup("U(1)", 2, [J2])


def so_pairs(n):
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def orthogonal_group(n):
    """SO(n) with the elementary antisymmetric basis E_ij = e_i e_j^T - e_j e_i^T."""
    basis = []
    for i, j in so_pairs(n):
        m = np.zeros((n, n))
        m[i, j] = 1.0
        m[j, i] = -1.0
        basis.append(m)
    return StructureGroup(f"SO({n})", n, basis)


def _zero_c(n):
    return lambda x, u, v: np.zeros(n)


def _zero_R(gdim):
    return lambda x, u, v: np.zeros(gdim)


def _trivial(n=2):
    group = orthogonal_group(n)
    base = BaseManifold(0, names=())
    return CartanModel(
        name="trivial",
        group=group,
        base=base,
        c=_zero_c(n),
        R=_zero_R(group.dim),
        F=lambda x, u: np.zeros(0),
        params={"n": n},
    )


def _constant_curvature(n=2):
    group = orthogonal_group(n)
    pairs = so_pairs(n)
    base = BaseManifold(1, names=("kappa",))

    def R(x, u, v):
        k = x[0]
        return np.array([k * (u[i] * v[j] - u[j] * v[i]) for i, j in pairs])

    return CartanModel(
        name="constant_curvature",
        group=group,
        base=base,
        c=_zero_c(n),
        R=R,
        F=lambda x, u: np.zeros(1),
        params={"n": n},
    )


def _ek_rotation(x, coeffs, t):
    # right action by exp(t lambda J): T -> e^{-i t lambda} T, K and U fixed
    ang = t * coeffs[0]
    ca, sa = np.cos(ang), np.sin(ang)
    K, X, Y, U = x
    return np.array([K, ca * X + sa * Y, -sa * X + ca * Y, U])


def _ek_rotation_jacobian(x, coeffs, t):
    ang = t * coeffs[0]
    ca, sa = np.cos(ang), np.sin(ang)
    jac = np.eye(4)
    jac[1, 1] = ca
    jac[1, 2] = sa
    jac[2, 1] = -sa
    jac[2, 2] = ca
    return jac


def _extremal_kahler():
    group = circle_group()
    base = BaseManifold(
        4,
        psi=lambda x, a: a[0] * np.array([0.0, x[2], -x[1], 0.0]),
        names=("K", "X", "Y", "U"),
        act=_ek_rotation,
        act_jacobian=_ek_rotation_jacobian,
    )

    def R(x, u, v):
        return np.array([-x[0] * (u[0] * v[1] - u[1] * v[0])])

    def F(x, u):
        K, X, Y, U = x
        # Re(T zbar) with T = X + iY, z = u[0] + i u[1]
        s = X * u[0] + Y * u[1]
        return np.array([-2.0 * s, U * u[0], U * u[1], -K * s])

    return CartanModel(
        name="extremal_kahler",
        group=group,
        base=base,
        c=_zero_c(2),
        R=R,
        F=F,
    )


def _su21_rotation(x, coeffs, t):
    ang = t * coeffs[0]
    ca, sa = np.cos(ang), np.sin(ang)
    a, b, u1, u2 = x
    return np.array([a, b, ca * u1 + sa * u2, -sa * u1 + ca * u2])


def _su21_rotation_jacobian(x, coeffs, t):
    ang = t * coeffs[0]
    ca, sa = np.cos(ang), np.sin(ang)
    jac = np.eye(4)
    jac[2, 2] = ca
    jac[2, 3] = sa
    jac[3, 2] = -sa
    jac[3, 3] = ca
    return jac


def _ek_su21():
    group = circle_group()
    base = BaseManifold(
        4,
        psi=lambda x, al: al[0] * np.array([0.0, 0.0, x[3], -x[2]]),
        names=("a", "b", "u1", "u2"),
        act=_su21_rotation,
        act_jacobian=_su21_rotation_jacobian,
    )

    def F(x, z):
        a, b, u1, u2 = x
        phi = (4.0 - 8.0 * a + 9.0 * b * b) / 16.0
        # z1 {u1, .} + z2 {u2, .} on (a, b, u1, u2)
        return np.array([
            0.75 * b * (z[0] * u2 - z[1] * u1),
            -z[0] * u2 + z[1] * u1,
            -z[1] * phi,
            z[0] * phi,
        ])

    def R(x, z, w):
        K = 1.5 * x[1]
        return np.array([-K * (z[0] * w[1] - z[1] * w[0])])

    return CartanModel(
        name="ek_su21",
        group=group,
        base=base,
        c=_zero_c(2),
        R=R,
        F=F,
    )


BUILTIN_MODELS = {
    "trivial": _trivial,
    "constant_curvature": _constant_curvature,
    "extremal_kahler": _extremal_kahler,
    "ek_su21": _ek_su21,
}


def builtin_model(name, **params):
    """Construct a builtin model by name.

    ``trivial`` and ``constant_curvature`` accept ``n`` (default 2); the two
    extremal-Kahler presentations take no parameters.
    """
    try:
        factory = BUILTIN_MODELS[name]
    except KeyError:
        raise UnknownModelError(
            f"unknown model {name!r}; available: {sorted(BUILTIN_MODELS)}") from None
    try:
        return factory(**params)
    except TypeError as exc:
        raise UnknownModelError(
            f"model {name!r} rejected parameters {params}: {exc}") from None


def scale_curvature(model, factor):
    """Copy of ``model`` with R multiplied by ``factor``.

    For factor != 1 this deliberately breaks the structure equations of any
    model with nonzero curvature: the anchor-bracket compatibility always,
    and the first Bianchi identity when the cyclic curvature sum is nonzero
    (fiber dimension >= 3).  Used as a negative control.
    """
    inner = model.R
    return CartanModel(
        name=f"{model.name}(R*{factor:g})",
        group=model.group,
        base=model.base,
        c=model.c,
        R=lambda x, u, v: factor * np.asarray(inner(x, u, v), dtype=float),
        F=model.F,
        params=dict(model.params, curvature_scale=factor),
    )
