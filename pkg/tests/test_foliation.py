"""Leaf ranks, isotropy algebras, and anchor flows."""

import numpy as np
import pytest

from cartankit import ek
from cartankit.errors import FlowError
from cartankit.foliation import (
    check_invariant,
    flow,
    isotropy_basis,
    leaf_rank,
    probe,
)
from cartankit.models import builtin_model


def kernel_structure(model, x, basis):
    """Structure constants and Killing form of the isotropy algebra."""
    k = len(basis)
    sc = np.zeros((k, k, k))
    B = np.asarray(basis)
    for i in range(k):
        for j in range(k):
            br = model.bracket_constant(x, B[i], B[j])
            coef, resid, *_ = np.linalg.lstsq(B.T, br, rcond=None)
            closure = np.linalg.norm(B.T @ coef - br)
            assert closure < 1e-10, "kernel not closed under the bracket"
            sc[i, j] = coef
    ad = [sc[i].T for i in range(k)]
    killing = np.array([[np.trace(ad[i] @ ad[j]) for j in range(k)]
                        for i in range(k)])
    return sc, killing


def test_generic_point_rank_two():
    model = builtin_model("extremal_kahler")
    x = np.array([0.3, 0.7, -0.2, 0.4])
    info = probe(model, x)
    assert info.leaf_dim == 2
    assert info.isotropy_dim == 1
    assert info.orbit_dim == 1
    d = info.as_dict()
    assert d["leaf_dim"] == 2 and d["isotropy_dim"] == 1


def test_kernel_collinear_with_flat_section():
    # at generic x = (K, X, Y, U) the isotropy line is spanned by (-Y, X, U)
    model = builtin_model("extremal_kahler")
    rng = np.random.default_rng(21)
    for _ in range(20):
        x = rng.uniform(-1.5, 1.5, 4)
        if np.hypot(x[1], x[2]) < 1e-3:
            continue
        basis = isotropy_basis(model, x)
        assert basis.shape == (1, 3)
        expected = np.array([-x[2], x[1], x[3]])
        cosang = abs(basis[0] @ expected) / (
            np.linalg.norm(basis[0]) * np.linalg.norm(expected))
        assert cosang > 1.0 - 1e-10


@pytest.mark.parametrize("K,negatives,degenerate", [
    (1.0, 3, False),    # so(3): Killing form negative definite
    (-1.0, 1, False),   # sl(2, R): signature (2, 1)
    (0.0, 1, True),     # se(2): degenerate Killing form
])
def test_axis_point_isotropy_taxonomy(K, negatives, degenerate):
    """At (K, 0, 0, 0) the anchor vanishes and the full fiber is isotropy;
    the K-sign picks the algebra out of so(3) / sl(2,R) / se(2)."""
    model = builtin_model("extremal_kahler")
    x = np.array([K, 0.0, 0.0, 0.0])
    info = probe(model, x)
    assert info.leaf_dim == 0
    assert info.isotropy_dim == 3
    basis = isotropy_basis(model, x)
    sc, killing = kernel_structure(model, x, basis)
    eig = np.linalg.eigvalsh(killing)
    assert sum(e < -1e-8 for e in eig) == negatives
    assert (min(abs(e) for e in eig) < 1e-8) == degenerate


def test_axis_point_structure_constants_with_standard_basis():
    # in the standard fiber basis: [e1, e2] = K e3, [e3, e1] = e2,
    # [e3, e2] = -e1
    model = builtin_model("extremal_kahler")
    for K in (2.0, -0.7):
        x = np.array([K, 0.0, 0.0, 0.0])
        e1, e2, e3 = np.eye(3)
        assert np.allclose(model.bracket_constant(x, e1, e2), K * e3,
                           atol=1e-12)
        assert np.allclose(model.bracket_constant(x, e3, e1), e2, atol=1e-12)
        assert np.allclose(model.bracket_constant(x, e3, e2), -e1, atol=1e-12)


def test_leaf_rank_across_models():
    assert leaf_rank(builtin_model("trivial"), np.zeros(0)) == 0
    assert leaf_rank(builtin_model("constant_curvature", n=2),
                     np.array([0.3])) == 0
    su = builtin_model("ek_su21")
    assert leaf_rank(su, np.array([0.2, 0.1, 0.5, -0.3])) == 2


def test_flow_conserves_invariants():
    # start on the compact sphere leaf of (c1, c2) = (0.75, 0), where the
    # anchor flow stays bounded for all time
    model = builtin_model("extremal_kahler")
    K = 1.0
    p = -K ** 3 / 12.0 + 0.75 * K
    x0 = np.array([K, np.sqrt(p), 0.0, K * K / 4.0 - 0.75])
    section = np.array([1.0, 0.0, 0.0])
    result = flow(model, x0, section, 5.0)
    assert result.points.shape[0] == result.t.shape[0] == 101
    i1 = np.array([ek.invariants(p)[0] for p in result.points])
    i2 = np.array([ek.invariants(p)[1] for p in result.points])
    assert np.max(np.abs(i1 - i1[0])) < 1e-8
    assert np.max(np.abs(i2 - i2[0])) < 1e-8
    # negative control: the scalar curvature coordinate genuinely moves
    assert np.max(np.abs(result.points[:, 0] - x0[0])) > 0.1


def test_flow_accepts_callable_section():
    model = builtin_model("extremal_kahler")
    x0 = np.array([0.1, 0.5, 0.2, -0.4])

    def section(x):
        return np.array([x[0], 1.0, 0.0])

    result = flow(model, x0, section, 1.0)
    assert np.all(np.isfinite(result.end))
    drift = abs(ek.invariants(result.end)[0] - ek.invariants(x0)[0])
    assert drift < 1e-8


def test_flow_stays_on_leaf_level_set():
    # flowing by the isotropy direction fixes the point
    model = builtin_model("extremal_kahler")
    x0 = np.array([0.4, 0.9, -0.3, 0.6])
    iso = np.array([-x0[2], x0[1], x0[3]])

    def section(x):
        return np.array([-x[2], x[1], x[3]])

    result = flow(model, x0, section, 2.0)
    assert np.allclose(result.end, x0, atol=1e-8)


def test_check_invariant_positive_and_negative():
    model = builtin_model("extremal_kahler")
    rng = np.random.default_rng(22)
    points = rng.uniform(-1.2, 1.2, size=(15, 4))
    good = check_invariant(model, lambda x: ek.invariants(x)[0], points)
    assert good < 1e-8
    bad = check_invariant(model, lambda x: x[0], points)
    assert bad > 0.1
    # supplying the exact gradient tightens the residual
    exact = check_invariant(model, lambda x: ek.invariants(x)[0], points,
                            grad=lambda x: ek.invariant_gradients(x)[0])
    assert exact < 1e-12


def test_flow_rejects_bad_section_shape():
    model = builtin_model("extremal_kahler")
    with pytest.raises(Exception):
        flow(model, np.zeros(4), np.zeros(5), 1.0)


def test_point_leaf_flow_is_stationary():
    model = builtin_model("extremal_kahler")
    x0 = np.array([1.0, 0.0, 0.0, 0.0])  # anchor vanishes identically
    result = flow(model, x0, np.array([0.0, 1.0, 0.0]), 3.0)
    assert np.allclose(result.points, x0, atol=1e-12)
