"""Smoke tests for the _mbadmm extension module."""

import math

import _mbadmm as m


def small_problem():
    # min -2 v + w^2  with v binary, w continuous, tied by the row pair
    # v - w <= 0 and w - v <= 0 (i.e. v = w)
    p = m.MboProblem(1, 1)
    p.a = [-2.0]
    p.P_u = [[2.0]]
    p.L_z = [[1.0], [-1.0]]
    p.L_u = [[-1.0], [1.0]]
    p.h_l = [0.0, 0.0]
    p.validate()
    return p


def test_solve_reaches_the_optimum():
    cfg = m.AdmmConfig()
    cfg.mode = m.SplitMode.two_block
    cfg.rho_init = 100.0
    cfg.rho_fixed = True
    cfg.x0 = [0.0]
    cfg.z0 = [0.5]
    cfg.u0 = [0.5]
    rep = m.solve(small_problem(), cfg)
    assert float(rep.best_point.x[0]) == 1.0
    assert math.isclose(float(rep.final_lambda[0]), 2.0, abs_tol=1e-3)
    # consensus stops at eps=1e-4, so the copy sits within ~1e-3 of v
    assert m.violation(small_problem(), rep.best_point) < 1e-2
    assert len(rep.trace) == rep.iterations


def test_problem_json_round_trip():
    p = small_problem()
    q = m.MboProblem.from_json(p.to_json())
    assert q.n_bin == 1 and q.n_cont == 1
    assert float(q.a[0]) == -2.0


def test_generators_and_exact_reference():
    bp = m.gen_bp(3, 40, 7)
    assert len(bp.w) == 3
    prob = m.bp_to_mbo(bp)
    ref = m.exact_mbo_solve(prob)
    assert ref.feasible
    assert ref.value >= bp.lower_bound()

    mk = m.gen_misk(2, 3, 1, 11)
    r = m.exact_mbo_solve(m.misk_to_mbo(mk))
    assert r.feasible
    assert r.value <= 1e-9  # doing nothing is always allowed


def test_merit_and_gap_helpers():
    p = small_problem()
    pt = m.MboPoint([1.0], [1.0])
    assert math.isclose(m.objective(p, pt), -1.0)
    assert m.violation(p, pt) == 0.0
    assert m.is_feasible(p, pt, 1e-9)
    assert math.isclose(m.gap(3.0, 2.0), 0.5, rel_tol=1e-9)
