from dataclasses import replace

import numpy as np
import pytest

from lanesim.diagnostics import (C_GRID, BoundTracker, EntropyReport, bv_growth_factor,
                                 entropy_c_values, entropy_residual_local,
                                 entropy_residual_nonlocal, l1_distance, lane_gap_l1,
                                 mass_per_lane, time_lipschitz_bound, tv_per_lane)
from lanesim.errors import GridMismatch, StateMismatch
from lanesim.grid import build_grid
from lanesim.profiles import ProfileSpec, cell_averages
from lanesim.scenarios import nonlocal_flux_bump, two_lane_local_flux
from lanesim.solver import run
from lanesim.velocity import LinearGreenshields, QuadraticConcave, VelocityModel


def collect_steps(config, n=None):
    recs = []
    out = run(config, [recs.append])
    return recs[:n] if n else recs, out


def test_zero_state():
    z = np.zeros((2, 10))
    np.testing.assert_array_equal(tv_per_lane(z), 0.0)
    np.testing.assert_array_equal(mass_per_lane(z, 0.1), 0.0)


@pytest.mark.parametrize("h", [0.1, 0.7, 1.0])
def test_spike_tv(h):
    r = np.zeros(10)
    r[4] = h
    assert tv_per_lane(r)[0] == pytest.approx(2 * h, abs=1e-15)
    r[0] = h  # ghost jump counts under the zero boundary
    assert tv_per_lane(r)[0] == pytest.approx(4 * h, abs=1e-15)
    assert tv_per_lane(r, "periodic")[0] == pytest.approx(4 * h, abs=1e-15)


def test_sin_sq_tv():
    g = build_grid(0, 2, 0.01)
    rho = cell_averages(ProfileSpec("sin_sq"), g.interfaces)
    # monotone pieces: up from 0 to the max, down to 0
    oracle = 2 * rho.max()
    assert tv_per_lane(rho)[0] == pytest.approx(oracle, abs=1e-15)
    assert tv_per_lane(rho)[0] == pytest.approx(2.0, abs=1e-3)


def test_l1_metric():
    rng = np.random.default_rng(7)
    for _ in range(50):
        a, b, c = rng.random((3, 2, 40))
        np.testing.assert_array_equal(l1_distance(a, a, 0.1), 0.0)
        np.testing.assert_allclose(l1_distance(a, b, 0.1), l1_distance(b, a, 0.1), atol=1e-14)
        assert np.all(l1_distance(a, c, 0.1)
                      <= l1_distance(a, b, 0.1) + l1_distance(b, c, 0.1) + 1e-14)


def test_l1_grid_mismatch():
    with pytest.raises(GridMismatch):
        l1_distance(np.zeros((2, 10)), np.zeros((2, 11)), 0.1)


def test_lane_gap():
    rho = np.vstack([np.full(10, 0.2), np.full(10, 0.5), np.full(10, 0.1)])
    assert lane_gap_l1(rho, 0.1) == pytest.approx(0.3 + 0.4)


def test_constant_state_residual_local():
    g = build_grid(0, 1, 0.05, "periodic")
    vel = VelocityModel([LinearGreenshields(1.0), LinearGreenshields(1.0)])
    rho = np.full((2, g.n_cells), 0.35)
    res = entropy_residual_local(rho, rho, rho, 0.01, g.dx, C_GRID, vel, rho, "periodic")
    np.testing.assert_array_equal(res, 0.0)


def test_constant_state_residual_nonlocal_interior():
    vel = VelocityModel([QuadraticConcave()])
    rho = np.full((1, 30), 0.35)
    r_iota = np.full((1, 31), 0.35)
    res = entropy_residual_nonlocal(rho, rho, rho, 0.01, 0.05, C_GRID, vel, rho, r_iota,
                                    check=False)
    np.testing.assert_allclose(res[:, :, 1:], 0.0, atol=1e-16)


def test_c_zero_reduces_to_update_identity():
    cfg = replace(two_lane_local_flux()[1], T=0.05, snapshot_times=())
    recs, _ = collect_steps(cfg)
    vel, dx = cfg.velocity, cfg.grid.dx
    for rec in recs:
        res = entropy_residual_local(rec.prev, rec.mid, rec.next, rec.dt, dx, 0.0, vel,
                                     rec.r_nu, "periodic")
        assert np.abs(res).max() <= 1e-15


def test_c_zero_nonlocal_identity():
    cfg = replace(nonlocal_flux_bump()[1], T=0.05, snapshot_times=())
    recs, _ = collect_steps(cfg)
    for rec in recs:
        res = entropy_residual_nonlocal(rec.prev, rec.mid, rec.next, rec.dt, cfg.grid.dx, 0.0,
                                        cfg.velocity, rec.r_nu, rec.r_iota)
        assert np.abs(res).max() <= 1e-15


def test_local_scenario_c_sweep():
    cfg = replace(two_lane_local_flux()[0], T=0.75, snapshot_times=())
    report = EntropyReport()
    cs = np.linspace(0.1, 0.9, 9)

    def check(rec):
        report.update(entropy_residual_local(rec.prev, rec.mid, rec.next, rec.dt, cfg.grid.dx,
                                             cs, cfg.velocity, rec.r_nu, "periodic"), cs, rec.n)

    run(cfg, [check])
    assert report.ok and report.max_residual <= 1e-12
    assert report.n_checked > 0


def test_mismatched_states_rejected():
    cfg = replace(two_lane_local_flux()[0], T=0.01, snapshot_times=())
    rec = collect_steps(cfg, 1)[0][0]
    with pytest.raises(StateMismatch):
        entropy_residual_local(rec.prev, rec.mid, rec.next + 1e-6, rec.dt, cfg.grid.dx, C_GRID,
                               cfg.velocity, rec.r_nu, "periodic")
    with pytest.raises(StateMismatch):
        entropy_residual_local(rec.prev, rec.prev, rec.next, rec.dt, cfg.grid.dx, C_GRID,
                               cfg.velocity, rec.r_nu, "periodic")


def test_printed_correction_index_fails():
    # With c (v(R_{k+1}) - v(R_k)) in place of c (v(R_k) - v(R_{k-1})) the
    # inequality is violated on the bump scenario; the shipped form holds.
    cfg = replace(nonlocal_flux_bump()[1], T=0.5, snapshot_times=())
    worst_ok, worst_alt = -np.inf, -np.inf
    vel, dx = cfg.velocity, cfg.grid.dx

    def check(rec):
        nonlocal worst_ok, worst_alt
        lam = rec.dt / dx
        res = entropy_residual_nonlocal(rec.prev, rec.mid, rec.next, rec.dt, dx, C_GRID, vel,
                                        rec.r_nu, rec.r_iota)
        V = np.stack([vel.v(j, rec.r_iota[j]) for j in range(2)])
        c = C_GRID[:, None, None]
        s = np.sign(rec.next[None, :, :-1] - c)
        alt = (res[..., :-1] - lam * s * c * (V[:, 1:-1] - V[:, :-2])
               + lam * s * c * (V[:, 2:] - V[:, 1:-1]))
        worst_ok = max(worst_ok, res.max())
        worst_alt = max(worst_alt, alt.max())

    run(cfg, [check])
    assert worst_ok <= 1e-12
    assert worst_alt > 1e-6


def test_entropy_report_tracks_argmax():
    rep = EntropyReport()
    res = np.zeros((3, 2, 5))
    res[1, 0, 4] = 2e-12
    rep.update(res, np.array([0.0, 0.5, 1.0]), 7)
    assert rep.argmax == (0, 4, 7, 0.5)
    assert rep.n_violations == 1 and not rep.ok


def test_c_values_include_extremes():
    cs = entropy_c_values(np.array([[0.123, 0.4], [0.2, 0.987]]))
    assert {0.123, 0.987, 0.0, 1.0}.issubset(set(cs.tolist()))
    assert len(C_GRID) == 21


def test_growth_and_lipschitz_bounds():
    assert bv_growth_factor(0.0, 5.0) == 1.0
    assert bv_growth_factor(0.1, 2.0, 4.0, 3.0) == pytest.approx(np.exp(0.1 * (16 + 12)))
    vel = VelocityModel([LinearGreenshields(1.0)])
    assert time_lipschitz_bound(0.01, 0.0, 0.5, 2.0, vel) == pytest.approx(
        2 * 0.01 * (2 * 1 * 0.5 + 2 * 2.0))


def test_bound_tracker():
    t = BoundTracker("x")
    t.observe(1.0, 2.0, 1)
    t.observe(3.0, 2.5, 2)
    assert t.worst == 0.5 and t.where == 2


def test_bv_bound_holds_along_run():
    cfg = replace(two_lane_local_flux()[2], T=0.3, snapshot_times=())
    out = run(cfg)
    tv0 = out.tvs[0].sum()
    growth = np.exp(8 * out.times * cfg.velocity.calK)
    assert np.all(out.tvs.sum(axis=1) <= growth * tv0)
