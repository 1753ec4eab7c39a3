"""Splittings, curvature periods, and G-monodromy verdicts."""

import numpy as np
import pytest

from helpers import c2_for_ratio, sphere_leaf_point

from cartankit import ek
from cartankit._kernels import ek_gprime
from cartankit.algebra import StructureGroup, BaseManifold, CartanModel
from cartankit.errors import CentralityError, SingularityError
from cartankit.monodromy import (
    DiskPatch,
    MonodromyProblem,
    Splitting,
    default_fiber_metric,
    g_monodromy,
    period,
    splitting_curvature,
    splitting_curvature_at,
)

GOLDEN_INVERSE = (np.sqrt(5.0) - 1.0) / 2.0


# -- splittings ---------------------------------------------------------------


def test_default_fiber_metric_is_identity_for_compact_groups(ek_model, cc3_model):
    assert np.allclose(default_fiber_metric(ek_model), np.eye(3))
    assert np.allclose(default_fiber_metric(cc3_model), np.eye(6))


def test_default_fiber_metric_falls_back_for_indefinite_pairing():
    # sl(2, R): the pairing -tr(AB)/2 is indefinite, so the metric must
    # fall back to the identity to stay usable for least squares
    basis = np.array([
        [[0.0, 1.0], [0.0, 0.0]],
        [[0.0, 0.0], [1.0, 0.0]],
        [[1.0, 0.0], [0.0, -1.0]],
    ])
    group = StructureGroup("SL(2,R)", 2, basis)
    base = BaseManifold(dim=1, psi=lambda x, a: np.zeros(1))
    model = CartanModel(
        group=group, base=base,
        c=lambda x, u, v: np.zeros(2),
        R=lambda x, u, v: np.zeros(3),
        F=lambda x, u: np.zeros(1),
        name="sl2 test shell",
    )
    assert np.allclose(default_fiber_metric(model), np.eye(5))


def test_sigma_is_a_right_inverse_of_the_anchor(ek_model, rng):
    for _ in range(10):
        x = rng.normal(size=4)
        sp = Splitting(ek_model)
        xi = rng.normal(size=3)
        v = ek_model.anchor(x, xi)
        lift = sp.sigma(x, v)
        assert np.allclose(ek_model.anchor(x, lift), v, atol=1e-9)


def test_sigma_is_metric_orthogonal_to_the_kernel(ek_model, rng):
    sp = Splitting(ek_model)
    for _ in range(10):
        x = rng.normal(size=4)
        K, X, Y, U = x
        kernel = np.array([-Y, X, U])    # spans ker rho at generic points
        resid = np.linalg.norm(ek_model.anchor(x, kernel))
        if resid > 1e-10 * (1 + np.linalg.norm(kernel)):
            continue
        v = ek_model.anchor(x, rng.normal(size=3))
        lift = sp.sigma(x, v)
        assert abs(lift @ sp.metric @ kernel) < 1e-9 * (1 + np.linalg.norm(lift))


def test_sigma_rejects_vectors_off_the_anchor_image(ek_model):
    x = np.array([1.2, 0.5, -0.3, 0.7])
    sp = Splitting(ek_model)
    A = ek_model.anchor_matrix(x)
    # build a direction orthogonal to the (rank-2) anchor image
    q, _ = np.linalg.qr(A)
    v = np.ones(4)
    v -= q @ (q.T @ v)
    assert np.linalg.norm(v) > 1e-3
    with pytest.raises(SingularityError):
        sp.sigma(x, v)


def test_kernel_projector_properties(ek_model, rng):
    sp = Splitting(ek_model)
    x = np.array([0.4, -1.1, 0.8, 0.3])
    P = sp.kernel_projector(x)
    assert np.allclose(P @ P, P, atol=1e-9)
    A = ek_model.anchor_matrix(x)
    assert np.linalg.norm(A @ P) < 1e-9
    K, X, Y, U = x
    kernel = np.array([-Y, X, U])
    assert np.allclose(P @ kernel, kernel, atol=1e-9)


# -- curvature of the splitting ----------------------------------------------


def test_splitting_curvature_matches_the_closed_coefficient():
    """On the cap disk the curvature is g'(K) dK/ds times the flat frame."""
    c1, c2 = 0.75, 0.0
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(c1, c2)
    _, cap, _ = ek.sphere_patches(prof)
    sp = Splitting(model)
    r3 = prof.roots[2]
    k0 = 2.0 * np.sqrt(c1)
    for s, t in [(0.35, 0.9), (0.6, 2.4), (0.8, 5.1)]:
        omega = splitting_curvature(model, sp, cap, s, t)
        K = r3 - (r3 - k0) * (1.0 - s) ** 2
        dK = 2.0 * (r3 - k0) * (1.0 - s)
        frame = np.asarray(cap.flat_frame(s, t), float)[0]
        expected = ek_gprime(K, c1, c2) * dK * frame
        assert np.allclose(omega, expected, rtol=1e-5, atol=1e-7)


def test_splitting_curvature_at_is_bilinear_in_the_patch_frame():
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(0.75, 0.0)
    _, cap, _ = ek.sphere_patches(prof)
    sp = Splitting(model)
    s, t = 0.55, 1.3
    gs, gt = cap.tangents(s, t)
    omega = splitting_curvature(model, sp, cap, s, t)
    v = 2.0 * gs - 0.5 * gt
    w = 1.5 * gs + 3.0 * gt
    got = splitting_curvature_at(model, sp, cap, s, t, v, w)
    det = 2.0 * 3.0 - (-0.5) * 1.5
    assert np.allclose(got, det * omega, rtol=1e-6, atol=1e-9)


def test_splitting_curvature_at_rejects_non_tangent_vectors():
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(0.75, 0.0)
    _, cap, _ = ek.sphere_patches(prof)
    sp = Splitting(model)
    gs, gt = cap.tangents(0.55, 1.3)
    normal = np.ones(4)
    frame = np.column_stack([gs, gt])
    q, _ = np.linalg.qr(frame)
    normal -= q @ (q.T @ normal)
    with pytest.raises(SingularityError):
        splitting_curvature_at(model, sp, cap, 0.55, 1.3, gs, normal)


# -- periods -------------------------------------------------------------------


def test_closed_form_periods_at_the_symmetric_level():
    prof = ek.cubic_profile(0.75, 0.0)
    a, b = ek.closed_form_periods(prof)
    assert np.isclose(a, 4.0 * np.pi / 3.0, rtol=1e-14)
    assert np.isclose(b, 8.0 * np.pi / 3.0, rtol=1e-14)


def test_quadrature_periods_match_the_closed_forms():
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(0.75, 0.0)
    sphere, cap, comp = ek.sphere_patches(prof)
    sp = Splitting(model)
    a, b = ek.closed_form_periods(prof)
    res_cap = period(model, sp, cap, rel_tol=1e-12)
    res_comp = period(model, sp, comp, rel_tol=1e-12)
    res_sphere = period(model, sp, sphere, rel_tol=1e-12)
    assert np.isclose(res_cap.scalar, a, rtol=1e-10)
    assert np.isclose(res_comp.scalar, b, rtol=1e-10)
    assert np.isclose(res_sphere.scalar, a + b, rtol=1e-10)
    for res in (res_cap, res_comp, res_sphere):
        assert res.converged
        assert res.panels >= 1
        assert res.error < 1e-8
        assert res.value.shape == (1,)


def test_period_is_additive_over_subpatches():
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(0.75, 0.11)
    _, cap, _ = ek.sphere_patches(prof)
    sp = Splitting(model)
    whole = period(model, sp, cap).scalar
    left = period(model, sp, cap.subpatch(s_range=(0.0, 0.4))).scalar
    right = period(model, sp, cap.subpatch(s_range=(0.4, 1.0))).scalar
    assert np.isclose(left + right, whole, rtol=1e-9)


def test_period_changes_sign_under_orientation_reversal():
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(0.75, 0.0)
    _, cap, _ = ek.sphere_patches(prof)
    sp = Splitting(model)
    fwd = period(model, sp, cap).scalar
    rev = period(model, sp, cap.reversed_orientation()).scalar
    assert np.isclose(rev, -fwd, rtol=1e-10)


def test_period_requires_a_frame_or_a_coefficient():
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(0.75, 0.0)
    _, cap, _ = ek.sphere_patches(prof)
    sp = Splitting(model)
    bare = DiskPatch(param=cap.param, s_range=cap.s_range, t_range=cap.t_range)
    with pytest.raises(CentralityError):
        period(model, sp, bare)


def test_period_detects_a_non_central_frame():
    # projecting on a frame the curvature does not commute with is meaningless
    model = ek.builtin_model("extremal_kahler")
    prof = ek.cubic_profile(0.75, 0.0)
    _, cap, _ = ek.sphere_patches(prof)
    sp = Splitting(model)
    bad = DiskPatch(param=cap.param, s_range=cap.s_range, t_range=cap.t_range,
                    flat_frame=lambda s, t: np.array([[1.0, 0.0, 0.0]]))
    with pytest.raises(CentralityError):
        period(model, sp, bad)


# -- g-monodromy reports -------------------------------------------------------


def test_symmetric_level_monodromy_is_discrete_one_half():
    report = ek.leaf_monodromy(0.75, 0.0)
    assert report.discrete == "discrete"
    assert report.integrable == "integrable"
    assert report.rationality.rational
    assert (report.rationality.p, report.rationality.q) == (1, 2)
    assert np.isclose(report.ratio, 0.5, atol=1e-12)
    gens = sorted(report.g_generators)
    assert np.allclose(gens, [4.0 * np.pi / 3.0, 8.0 * np.pi / 3.0], rtol=1e-10)
    assert np.allclose(report.monodromy_generators, [4.0 * np.pi], rtol=1e-10)


@pytest.mark.parametrize("p,q", [(2, 3), (3, 5)])
def test_constructed_rational_levels_are_detected(p, q):
    c2 = c2_for_ratio(0.75, p / q)
    report = ek.leaf_monodromy(0.75, c2)
    assert report.discrete == "discrete"
    assert report.rationality.rational
    assert (report.rationality.p, report.rationality.q) == (p, q)


def test_golden_ratio_level_is_not_discrete():
    c2 = c2_for_ratio(0.75, GOLDEN_INVERSE)
    report = ek.leaf_monodromy(0.75, c2)
    assert report.discrete == "not_discrete"
    assert report.integrable == "not_integrable"
    assert not report.rationality.rational


def test_levels_without_sphere_leaves_report_trivially():
    report = ek.leaf_monodromy(0.0, 1.0)
    assert report.kind == "no_sphere"
    assert report.monodromy_generators == []
    assert report.g_generators == []
    assert report.discrete == "discrete"
    assert report.rationality is None


def test_non_locally_free_problems_stay_undecided():
    problem = ek.monodromy_problem(0.75, 0.0)
    problem.locally_free = False
    report = g_monodromy(problem)
    assert report.discrete == "undecided"
    assert report.integrable == "undecided"
    assert report.rationality is None


def test_single_generator_groups_are_discrete():
    base = ek.monodromy_problem(0.75, c2_for_ratio(0.75, GOLDEN_INVERSE))
    solo = MonodromyProblem(
        model=base.model, leaf_label=base.leaf_label, kind=base.kind,
        sphere_patches=list(base.sphere_patches), disk_patches=[],
        splitting=base.splitting, locally_free=True)
    report = g_monodromy(solo)
    assert report.discrete == "discrete"
    assert report.g_generators == []
    assert len(report.monodromy_generators) == 1


def test_numeric_curvature_path_agrees_with_closed_forms():
    """Finite-difference periods must reproduce the closed-form generators."""
    problem = ek.monodromy_problem(0.75, 0.0, numeric=True)
    report = g_monodromy(problem)
    assert report.discrete == "discrete"
    assert (report.rationality.p, report.rationality.q) == (1, 2)
    gens = sorted(report.g_generators)
    assert np.allclose(gens, [4.0 * np.pi / 3.0, 8.0 * np.pi / 3.0], atol=1e-8)
    # the report must disclose the relaxed finite-difference tolerances
    assert report.tolerances["quad_rel_tol"] == pytest.approx(3e-7)


def test_report_as_dict_round_trips_the_fields():
    report = ek.leaf_monodromy(0.75, 0.0)
    d = report.as_dict()
    assert d["leaf"].startswith("sphere leaf")
    assert d["kind"] == "sphere"
    assert d["discrete"] == "discrete"
    assert d["integrable"] == "integrable"
    assert d["rationality"]["rational"] is True
    assert d["quadrature"]["panels"] > 0
    assert set(d["tolerances"]) == {
        "quad_rel_tol", "quad_abs_tol", "denominator_bound",
        "rational_residual_tol",
    }


def test_sphere_leaf_point_helper_stays_on_the_level_set():
    x = sphere_leaf_point(0.75, 0.0, 1.0, theta=0.4)
    K, X, Y, U = x
    i1 = K * K / 4.0 - U
    i2 = X * X + Y * Y + K * U - K ** 3 / 6.0
    assert np.isclose(i1, 0.75, atol=1e-12)
    assert np.isclose(i2, 0.0, atol=1e-12)
