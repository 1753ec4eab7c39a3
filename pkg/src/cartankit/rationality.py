"""Bounded rationality detection via continued fractions.

Floating-point data can only certify rationality *up to a denominator
bound*: the verdict for a ratio r is either "rational, equal to p/q within
the residual tolerance, q <= bound" or "no such p/q exists".  Convergents
of the continued-fraction expansion of r are exactly the best rational
approximations, so scanning them up to the bound decides the question.

One subtlety: the default policy (bound 10^6, tolerance 1e-12) sits at the
Dirichlet boundary tol = 1/bound^2, where *every* real number admits
convergents within tolerance (even the golden ratio, the worst-approximable
number, reaches 6.5e-13 at q = 832040).  A residual test alone therefore
degenerates.  The verdict additionally demands approximation quality far
beyond the generic |r - p/q| ~ 1/q^2 scale: residual * q^2 must not exceed
the ``quality`` margin, whose default 1e-4 is the double-precision
information floor (eps * q^2 at the denominator bound).  Genuine rationals
computed from clean data clear it by many orders of magnitude; generic
irrationals essentially never do.
"""

from dataclasses import dataclass
from math import gcd, isfinite

__all__ = ["RationalityVerdict", "detect_rational", "DENOMINATOR_BOUND",
           "RESIDUAL_TOL", "QUALITY_MARGIN"]

DENOMINATOR_BOUND = 10**6
RESIDUAL_TOL = 1e-12
QUALITY_MARGIN = 1e-4


@dataclass
class RationalityVerdict:
    rational: bool
    p: int | None
    q: int | None
    residual: float | None
    bound: int
    tol: float
    quality: float = QUALITY_MARGIN

    def as_dict(self):
        return {
            "rational": self.rational,
            "p": self.p,
            "q": self.q,
            "residual": self.residual,
            "denominator_bound": self.bound,
            "residual_tol": self.tol,
            "quality_margin": self.quality,
        }


def _convergents(x, bound, max_terms=64):
    """Continued-fraction convergents (p, q) of x with q <= bound."""
    p_prev, q_prev = 0, 1
    p_cur, q_cur = 1, 0
    value = x
    for _ in range(max_terms):
        a = int(value // 1.0)
        p_next = a * p_cur + p_prev
        q_next = a * q_cur + q_prev
        if q_next > bound:
            # best approximation with denominator <= bound may be a
            # semiconvergent; include the largest admissible one
            if q_cur > 0:
                k = (bound - q_prev) // q_cur
                if k > 0:
                    yield k * p_cur + p_prev, k * q_cur + q_prev
            return
        yield p_next, q_next
        p_prev, q_prev = p_cur, q_cur
        p_cur, q_cur = p_next, q_next
        frac = value - a
        if frac <= 0.0:
            return
        value = 1.0 / frac
        if not isfinite(value):
            return


def detect_rational(x, bound=DENOMINATOR_BOUND, tol=RESIDUAL_TOL,
                    quality=QUALITY_MARGIN):
    """Decide whether x is p/q with q <= bound to residual tolerance tol.

    A candidate is accepted only when its residual clears both the absolute
    tolerance and the Dirichlet-quality margin residual * q^2 <= quality
    (see the module docstring).  Returns a :class:`RationalityVerdict`;
    when rational, (p, q) is the reduced best approximation and
    ``residual`` the achieved |x - p/q|.
    """
    x = float(x)
    if not isfinite(x):
        return RationalityVerdict(False, None, None, None, bound, tol,
                                  quality)
    sign = -1 if x < 0 else 1
    best = None
    for p, q in _convergents(abs(x), bound):
        r = abs(abs(x) - p / q)
        if r <= tol and r * q * q <= quality and (best is None or r < best[2]):
            best = (p, q, r)
    if best is None:
        return RationalityVerdict(False, None, None, None, bound, tol,
                                  quality)
    p, q, r = best
    g = gcd(p, q) or 1
    return RationalityVerdict(True, sign * (p // g), q // g, r, bound, tol,
                              quality)
