"""The su(2,1) picture of the extremal-Kahler algebroid.

The base R^4 embeds as an affine transversal X inside su(2,1): the point
with coordinates (a, b, u = u1 + i u2) is the matrix

        [ i(a - b/2)      u        1 - a      ]
    x = [ -conj(u)        i b      -i conj(u) ]
        [ 1 - a           i u      -i(a + b/2)]

(anti-Hermitian for the signature form eta = diag(1, 1, -1), traceless).
The two matrix invariants restrict on X to closed-form polynomials

    C(a, b, u) = tr(x^2) = 2 - 4a - 3/2 b^2,
    det x = -i/4 (4b - 8ab + b^3 + 8 u conj(u)),

and under the change of variables

    K = 3/2 b,   X = 3/4 u2,   Y = -3/4 u1,   U = 3/64 (4 - 8a + 9 b^2)

they match the extremal-Kahler Casimirs: C = -32/3 I1, det = -32i/9 I2.

At a point with u = 0 the isotropy group inside the simply connected group
integrating su(2,1) is generated by a pair of commuting one-parameter
subgroups whose frequencies are b and mu = sqrt(1 - 2a); the subgroup is
closed when mu is real (1 - 2a >= 0), and otherwise exactly when
b / |mu| is rational.  The exact identity

    Delta = -1/16 U^2 (1 - 2a)

(expand 16 c1^3 - 9 c2^2 = 4 U^2 (3 K^2/4 - 4U) at u = 0 and substitute
the dictionary) ties this criterion to the discriminant of the cubic leaf
profile: mu imaginary exactly where sphere leaves exist.
"""

from dataclasses import dataclass

import numpy as np

from .ek import cubic_profile, invariants
from .errors import RepresentationError
from .rationality import (
    DENOMINATOR_BOUND,
    QUALITY_MARGIN,
    RESIDUAL_TOL,
    detect_rational,
)

__all__ = [
    "ETA",
    "su21_matrix",
    "su21_membership_residual",
    "su21_embed",
    "su21_invariants",
    "closed_form_invariants",
    "to_ek_point",
    "from_ek_point",
    "jacobian_to_ek",
    "dictionary_residuals",
    "KernelClosedness",
    "su21_kernel_closed",
]

ETA = np.diag([1.0, 1.0, -1.0]).astype(complex)


def su21_matrix(a, b, u, v, w):
    """General element of su(2,1) in the displayed pattern.

    a, b are real; u, v, w complex.  Raises
    :class:`RepresentationError` if the result fails the membership
    identities (it cannot, for finite inputs, but the check documents
    the convention).
    """
    a = float(a)
    b = float(b)
    u = complex(u)
    v = complex(v)
    w = complex(w)
    x = np.array([
        [1j * (a - b / 2.0), u, v],
        [-np.conj(u), 1j * b, w],
        [np.conj(v), np.conj(w), -1j * (a + b / 2.0)],
    ])
    res = su21_membership_residual(x)
    if res > 1e-12 * max(1.0, float(np.max(np.abs(x)))):
        raise RepresentationError(f"matrix leaves su(2,1): residual {res:g}")
    return x


def su21_membership_residual(x):
    """max(|x^dagger eta + eta x|, |tr x|) — zero exactly on su(2,1)."""
    x = np.asarray(x, dtype=complex)
    herm = np.conj(x.T) @ ETA + ETA @ x
    return max(float(np.max(np.abs(herm))), abs(complex(np.trace(x))))


def su21_embed(a, b, u):
    """Image of the transversal point (a, b, u) inside su(2,1).

    The affine slice fixes v = 1 - a (real) and w = -i conj(u).
    """
    u = complex(u)
    return su21_matrix(a, b, u, 1.0 - float(a), -1j * np.conj(u))


def su21_invariants(x):
    """(C, det x) of a su(2,1) matrix: trace-form Casimir and determinant.

    The determinant is expanded in cofactors: exact for 3 x 3 and, unlike
    the LU path, free of the reciprocal-scaling artifacts that turn
    subnormal entries into NaN.
    """
    x = np.asarray(x, dtype=complex)
    casimir = complex(np.trace(x @ x))
    det = (x[0, 0] * (x[1, 1] * x[2, 2] - x[1, 2] * x[2, 1])
           - x[0, 1] * (x[1, 0] * x[2, 2] - x[1, 2] * x[2, 0])
           + x[0, 2] * (x[1, 0] * x[2, 1] - x[1, 1] * x[2, 0]))
    return casimir, complex(det)


def closed_form_invariants(a, b, u):
    """The restriction of (C, det) to the transversal, as polynomials."""
    a = float(a)
    b = float(b)
    uu = abs(complex(u)) ** 2
    casimir = 2.0 - 4.0 * a - 1.5 * b * b
    det = -0.25j * (4.0 * b - 8.0 * a * b + b ** 3 + 8.0 * uu)
    return complex(casimir), det


def to_ek_point(a, b, u1, u2):
    """Transversal coordinates -> extremal-Kahler base point (K, X, Y, U)."""
    a = float(a)
    b = float(b)
    return np.array([
        1.5 * b,
        0.75 * float(u2),
        -0.75 * float(u1),
        (3.0 / 64.0) * (4.0 - 8.0 * a + 9.0 * b * b),
    ])


def from_ek_point(x):
    """Inverse change of variables (K, X, Y, U) -> (a, b, u1, u2)."""
    K, X, Y, U = (float(t) for t in np.asarray(x, dtype=float))
    b = 2.0 * K / 3.0
    return np.array([
        (4.0 + 9.0 * b * b - (64.0 / 3.0) * U) / 8.0,
        b,
        -4.0 * Y / 3.0,
        4.0 * X / 3.0,
    ])


def jacobian_to_ek(a, b, u1, u2):
    """d(K, X, Y, U)/d(a, b, u1, u2) of the change of variables."""
    return np.array([
        [0.0, 1.5, 0.0, 0.0],
        [0.0, 0.0, 0.0, 0.75],
        [0.0, 0.0, -0.75, 0.0],
        [-3.0 / 8.0, (27.0 / 32.0) * float(b), 0.0, 0.0],
    ])


def dictionary_residuals(a, b, u1, u2):
    """Deviations of all four invariant identities at one point.

    Returns a dict of absolute residuals: the two closed forms against
    the matrix invariants, and the two cross-picture dictionaries
    C = -32/3 I1 and det = -32i/9 I2 through the change of variables.
    """
    u = complex(float(u1), float(u2))
    x = su21_embed(a, b, u)
    casimir, det = su21_invariants(x)
    casimir_poly, det_poly = closed_form_invariants(a, b, u)
    i1, i2 = invariants(to_ek_point(a, b, u1, u2))
    return {
        "casimir_closed_form": abs(casimir - casimir_poly),
        "det_closed_form": abs(det - det_poly),
        "casimir_dictionary": abs(casimir - (-32.0 / 3.0) * i1),
        "det_dictionary": abs(det - (-32.0j / 9.0) * i2),
        "membership": su21_membership_residual(x),
    }


@dataclass
class KernelClosedness:
    closed: str               # "closed" | "not_closed" | "undecided"
    criterion: str            # "mu_real" | "rational_ratio"
    mu_squared: float
    mu_abs: float
    ratio: float | None
    rationality: object
    delta: float
    delta_identity_residual: float
    delta_sign_consistent: bool

    def as_dict(self):
        return {
            "closed": self.closed,
            "criterion": self.criterion,
            "mu_squared": self.mu_squared,
            "mu_abs": self.mu_abs,
            "ratio": self.ratio,
            "rationality": self.rationality.as_dict()
            if self.rationality else None,
            "delta": self.delta,
            "delta_identity_residual": self.delta_identity_residual,
            "delta_sign_consistent": self.delta_sign_consistent,
        }


def su21_kernel_closed(a, b, bound=DENOMINATOR_BOUND, tol=RESIDUAL_TOL,
                       quality=QUALITY_MARGIN):
    """Closedness of the isotropy subgroup over the u = 0 point (a, b).

    The subgroup is closed whenever mu^2 = 1 - 2a >= 0; for mu imaginary it
    winds a torus with frequency ratio b/|mu| and is closed exactly when
    that ratio is rational, decided by the bounded continued-fraction test.
    The verdict also reports the residual of the exact discriminant
    identity Delta = -1/16 U^2 (1 - 2a) through the change of variables,
    and whether sign(Delta) agrees with -sign(1 - 2a) as it must.
    """
    a = float(a)
    b = float(b)
    mu_sq = 1.0 - 2.0 * a
    mu_abs = float(np.sqrt(abs(mu_sq)))

    point = to_ek_point(a, b, 0.0, 0.0)
    c1, c2 = invariants(point)
    delta = cubic_profile(c1, c2).delta
    predicted = -(1.0 / 16.0) * point[3] ** 2 * mu_sq
    scale = max(abs(delta), abs(predicted), 1e-30)
    identity_residual = abs(delta - predicted) / scale
    # sign agreement with a tolerance collar: near the U = 0 or mu = 0
    # locus both sides vanish and any sign is consistent
    tiny = float(1e-12 * max(point[3] ** 2, 1.0))
    sign_ok = bool(abs(delta) <= tiny or abs(predicted) <= tiny
                   or (delta > 0) == (predicted > 0))

    if mu_sq >= 0.0:
        return KernelClosedness(
            closed="closed", criterion="mu_real", mu_squared=mu_sq,
            mu_abs=mu_abs, ratio=None, rationality=None, delta=delta,
            delta_identity_residual=identity_residual,
            delta_sign_consistent=sign_ok)

    ratio = b / mu_abs
    verdict = detect_rational(ratio, bound=bound, tol=tol, quality=quality)
    return KernelClosedness(
        closed="closed" if verdict.rational else "not_closed",
        criterion="rational_ratio", mu_squared=mu_sq, mu_abs=mu_abs,
        ratio=ratio, rationality=verdict, delta=delta,
        delta_identity_residual=identity_residual,
        delta_sign_consistent=sign_ok)
