"""Smoke tests for the python bindings."""

import math

import numpy as np
import pytest

import circumfeas as cf


def test_projection_and_reflection():
    axis = cf.LinearSubspace(np.array([[1.0], [0.0]]))
    np.testing.assert_allclose(axis.project(np.array([1.0, 1.0])), [1.0, 0.0])
    np.testing.assert_allclose(axis.reflect(np.array([1.0, 1.0])), [1.0, -1.0])

    ball = cf.Ball(np.zeros(2), 1.0)
    np.testing.assert_allclose(ball.project(np.array([2.0, 0.0])), [1.0, 0.0])

    sphere = cf.Sphere(np.zeros(2), 1.0)
    with pytest.raises(cf.UndefinedProjectionError):
        sphere.project(np.zeros(2))


def test_orthonormalize_compresses_rank():
    basis = cf.orthonormalize(np.array([[1.0, 2.0], [0.0, 0.0]]))
    assert basis.dim == 1
    np.testing.assert_allclose(basis.columns.ravel(), [1.0, 0.0])


def test_circumcenter_matches_hand_value():
    points = [np.array([0.0, 0.0]), np.array([2.0, 0.0]), np.array([0.0, 2.0])]
    np.testing.assert_allclose(cf.circumcenter(points), [1.0, 1.0], atol=1e-12)


def test_cdrm_step_solves_plane_problems_in_one_go():
    u = cf.LinearSubspace(np.array([[1.0], [0.0]]))
    theta = math.pi / 3.0
    v = cf.LinearSubspace(np.array([[math.cos(theta)], [math.sin(theta)]]))
    step = cf.cdrm_step(u, v, np.array([1.0, 1.0]))
    np.testing.assert_allclose(step, [0.0, 0.0], atol=1e-12)


def test_friedrichs_cosine():
    u = cf.LinearSubspace(np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]]))
    theta = math.pi / 3.0
    v = cf.LinearSubspace(
        np.array([[1.0, 0.0], [0.0, math.cos(theta)], [0.0, math.sin(theta)]])
    )
    angle = cf.friedrichs_cosine(u, v)
    assert angle.cosine == pytest.approx(0.5)
    assert angle.intersection_dim == 1


def test_solver_on_a_random_pair():
    inst = cf.random_pair(30, 10, 9, 3, seed=2)
    assert inst.metadata.intersection_dim == 3
    x0 = np.random.default_rng(0).standard_normal(30)
    result = cf.solve("cdrm", inst.sets, x0, criterion="gap", tol=1e-8,
                      prestep="project-v")
    assert result.stop_reason == "converged"
    assert result.final_gap < 1e-8

    drm = cf.solve("drm", inst.sets, x0, criterion="gap", tol=1e-8,
                   prestep="project-v")
    assert drm.stop_reason == "converged"
    assert result.iterations <= drm.iterations


def test_gallery_round_trip():
    names = cf.gallery_names()
    assert "three_lines" in names
    inst = cf.gallery("ball_line_tangent")
    again = cf.instance_from_json(inst.to_json())
    assert again.to_json() == inst.to_json()
    np.testing.assert_allclose(inst.reference_solution, [0.0, 0.0])


def test_multiset_three_lines():
    inst = cf.gallery("three_lines")
    result = cf.solve("cdrm-multiset", inst.sets, np.array([1.3, -0.4]),
                      criterion="gap", tol=1e-10)
    assert result.stop_reason == "converged"
    assert result.iterations <= 2


def test_empirical_rate_matches_theory():
    inst = cf.canonical_pair(6, [0.9], 1, seed=4)
    c_f = inst.metadata.friedrichs_cosine
    x0 = np.random.default_rng(1).standard_normal(6)
    result = cf.solve("drm", inst.sets, x0, criterion="true-error", tol=1e-30,
                      max_iter=40, prestep="project-u", trace="scalars")
    rate = cf.empirical_rate(result, result.reference)
    assert rate == pytest.approx(c_f, abs=1e-6)


def test_experiment_and_profile():
    records = cf.run_experiment(n=12, instances=2, starts=2,
                                methods=["drm", "cdrm"], tol=1e-6, seed=3,
                                threads=1)
    assert len(records) == 8
    assert all(r.stop_reason == "converged" for r in records)
    profile = cf.performance_profile(records)
    assert set(profile.methods) == {"drm", "cdrm"}
    cdrm = profile.methods.index("cdrm")
    assert profile.rho(cdrm, profile.failure_ratio_cap) == 1.0
