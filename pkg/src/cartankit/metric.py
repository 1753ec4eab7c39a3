"""Leaf metrics and completeness analysis.

For a metric-type model (orthogonal structure group, vanishing torsion) the
fiber metric <(u,a),(v,b)> = u.v - 1/2 tr(AB) descends through any
metric-orthogonal splitting sigma to a Riemannian metric on each leaf:

    K_L(v, w) = <sigma(v), sigma(w)>.

Realizations over a leaf are complete exactly when the classification
declares the leaf complete; for the extremal-Kahler leaf families the
verdict is compactness of the leaf, and the per-end analysis reports the
honest geodesic length of every end (unbounded cubic ends and excluded
simple-root ends have finite length; double-root ends lie at infinite
distance).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .errors import MetricTypeError, ProfileError

__all__ = [
    "leaf_metric",
    "LeafEnd",
    "LeafProfile",
    "CompletenessVerdict",
    "completeness_verdict",
    "end_length_probe",
    "complete_solution_report",
]

_METRIC_CACHE = {}


def _require_metric_type(model):
    key = id(model)
    flag = _METRIC_CACHE.get(key)
    if flag is None:
        from .verify import is_metric_type
        flag = is_metric_type(model)
        _METRIC_CACHE[key] = flag
    if not flag:
        raise MetricTypeError(
            f"model {model.name!r} is not metric-type (needs an orthogonal "
            "structure group and vanishing torsion)")


def leaf_metric(model, splitting, x, v, w, check_type=True):
    """Leaf metric K_L(v, w) at x for tangent vectors v, w of the leaf."""
    if check_type:
        _require_metric_type(model)
    sv = splitting.sigma(x, np.asarray(v, dtype=float))
    sw = splitting.sigma(x, np.asarray(w, dtype=float))
    return float(sv @ splitting.metric @ sw)


@dataclass
class LeafEnd:
    """One end (or closed endpoint) of a leaf profile interval."""

    K: float                 # endpoint value, +-inf allowed
    kind: str                # "unbounded" | "simple_root" | "double_root" | "triple_root"
    included: bool           # closed endpoint (smooth pole) vs open end
    length_finite: bool = None

    def as_dict(self):
        return {
            "K": self.K if np.isfinite(self.K) else
            ("-inf" if self.K < 0 else "inf"),
            "kind": self.kind,
            "included": self.included,
            "length_finite": self.length_finite,
        }


@dataclass
class LeafProfile:
    """A 2-dimensional leaf family over a K-interval of one cubic profile.

    p(K) = -K^3/12 + c1 K + c2 must be positive on the open interval; the
    endpoint kinds describe the root structure there.
    """

    c1: float
    c2: float
    lo: LeafEnd
    hi: LeafEnd

    def p(self, K):
        return -K ** 3 / 12.0 + self.c1 * K + self.c2

    def validate(self):
        if np.isfinite(self.lo.K) and np.isfinite(self.hi.K) \
                and not self.lo.K < self.hi.K:
            raise ProfileError("empty leaf interval")
        if self.lo.kind == "unbounded" and np.isfinite(self.lo.K):
            raise ProfileError("unbounded end must sit at -inf")
        for end in (self.lo, self.hi):
            if end.included and end.kind not in ("simple_root",):
                raise ProfileError(
                    "only simple roots are smooth poles; "
                    f"cannot include a {end.kind} endpoint")


# analytic end lengths: int dK / (2 sqrt(p)) near the end
_END_FINITE = {
    "unbounded": True,       # p ~ |K|^3/12, integrand ~ |K|^{-3/2}
    "simple_root": True,     # p ~ |p'| |K - r|, integrand ~ |K - r|^{-1/2}
    "double_root": False,    # p ~ a (K - r)^2, logarithmic divergence
    "triple_root": False,    # p ~ |K - r|^3/12 with r = 0, divergence
}


@dataclass
class CompletenessVerdict:
    complete: bool
    compact: bool
    reason: str
    ends: list = field(default_factory=list)

    def as_dict(self):
        return {
            "complete": self.complete,
            "compact": self.compact,
            "reason": self.reason,
            "ends": [e.as_dict() for e in self.ends],
        }


def completeness_verdict(profile):
    """Completeness of the leaf metric over a :class:`LeafProfile`.

    A leaf is complete exactly when it is compact (both endpoints are
    included simple-root poles).  For incomplete leaves the reason names
    the responsible end, and every end carries its analytic geodesic-length
    classification.
    """
    profile.validate()
    ends = []
    for end in (profile.lo, profile.hi):
        if not end.included:
            end.length_finite = _END_FINITE[end.kind]
        else:
            end.length_finite = True  # included pole: interior point
        ends.append(end)
    compact = profile.lo.included and profile.hi.included
    if compact:
        return CompletenessVerdict(True, True,
                                   "compact leaf (both endpoints are smooth "
                                   "simple-root poles)", ends)
    finite_open = [e for e in ends if not e.included and e.length_finite]
    if finite_open:
        e = finite_open[0]
        where = "K -> -inf (cubic growth)" if e.kind == "unbounded" \
            else f"the excluded {e.kind.replace('_', ' ')} end at K = {e.K:g}"
        reason = f"geodesics reach {where} in finite time"
    else:
        opens = [e for e in ends if not e.included]
        e = opens[0]
        reason = (f"noncompact leaf bounded by a {e.kind.replace('_', ' ')} "
                  f"end at K = {e.K:g} (at infinite distance); only compact "
                  "leaves carry complete solutions")
    return CompletenessVerdict(False, False, reason, ends)


def end_length_probe(profile, which="lo", ref=None, levels=(1e-2, 1e-4, 1e-6)):
    """Numeric geodesic length toward one end of a leaf profile.

    Integrates dK / (2 sqrt(p)) from a reference K to points approaching
    the end at the given cutoff levels and classifies convergence from the
    successive increments (shrinking => finite, steady => divergent).
    Returns (finite: bool, lengths: list).
    """
    profile.validate()
    end = profile.lo if which == "lo" else profile.hi
    other = profile.hi if which == "lo" else profile.lo

    if ref is None:
        if np.isfinite(end.K) and np.isfinite(other.K):
            ref = 0.5 * (end.K + other.K)
        elif np.isfinite(end.K):
            ref = end.K - 1.0 if which == "hi" else end.K + 1.0
        else:
            ref = other.K - 1.0 if np.isfinite(other.K) else 0.0

    def integrand(K):
        return 1.0 / (2.0 * np.sqrt(profile.p(K)))

    lengths = []
    for eps in levels:
        if np.isfinite(end.K):
            span = abs(ref - end.K)
            target = end.K + eps * span if which == "lo" else end.K - eps * span
        else:
            target = -1.0 / eps + min(ref, 0.0)
        a, b = (target, ref) if which == "lo" else (ref, target)
        with warnings.catch_warnings():
            # probing toward a root makes the integrand near-singular on
            # purpose; roundoff chatter there is part of the measurement
            warnings.simplefilter("ignore", IntegrationWarning)
            val, _ = quad(integrand, a, b, limit=200)
        lengths.append(float(val))
    inc1 = lengths[1] - lengths[0]
    inc2 = lengths[2] - lengths[1]
    finite = inc2 < 0.5 * inc1 + 1e-12
    return finite, lengths


def complete_solution_report(model, leaf_params):
    """Classification + completeness + monodromy verdicts for a level set.

    ``leaf_params`` carries the invariant level (c1, c2).  Supported for the
    extremal-Kahler presentations, whose leaf atlas is known in closed form.
    """
    if model.name not in ("extremal_kahler", "ek_su21"):
        raise MetricTypeError(
            "complete_solution_report needs a model with a known leaf atlas "
            f"(extremal_kahler or ek_su21), got {model.name!r}")
    from .ek import classify  # deferred: ek builds on this module
    c1 = float(leaf_params["c1"])
    c2 = float(leaf_params["c2"])
    cls = classify(c1, c2)
    out = {
        "model": model.name,
        "c1": c1,
        "c2": c2,
        "delta": cls.profile.delta,
        "delta_sign": cls.profile.delta_sign,
        "leaves": [],
    }
    for fam in cls.families:
        entry = fam.as_dict()
        if fam.complete and fam.solution is not None:
            # complete 1-connected solutions integrate from a source fiber
            entry["source_fiber"] = {
                "point": [float(v) for v in fam.source_point],
                "statement": ("complete solution realized on the source "
                              "fiber of the G-integration over this point"),
            }
        out["leaves"].append(entry)
    return out
