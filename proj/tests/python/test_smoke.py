"""End-to-end smoke tests for the python bindings.

These stay fast (seconds): exhaustive numeric validation lives in the C++
suites; here we only confirm that the bound API round-trips data correctly.
"""

import math

import numpy as np
import pytest

import edgescope as es


def stable_run(seed=1, steps=1200):
    net = es.build_network(seed=seed, nodes=20, sigma=0.5)
    params = es.ReservoirParams()
    params.kind = es.ReservoirKind.MAP
    params.alpha = 0.25
    params.p1 = params.p2 = params.p3 = 0.5
    rng = np.random.default_rng(seed)
    s = rng.uniform(-1.0, 1.0, steps)
    return net, params, es.run_reservoir(net, params, s), s


def test_network_is_deterministic_and_rescaled():
    a = es.build_network(seed=5, nodes=30, sigma=0.7)
    b = es.build_network(seed=5, nodes=30, sigma=0.7)
    c = es.build_network(seed=6, nodes=30, sigma=0.7)
    assert np.array_equal(a.A, b.A)
    assert np.array_equal(a.W, b.W)
    assert not np.array_equal(a.A, c.A)
    assert a.sigma == pytest.approx(0.7)
    assert es.spectral_radius(a.A) == pytest.approx(0.7, abs=1e-6)
    assert np.all(np.diag(a.A) == 0.0)


def test_reservoir_run_shape_and_replay():
    net, params, run, s = stable_run()
    assert run.stable
    assert run.states.shape == (len(s), 20)
    assert np.all(run.states[0] == 0.0)
    assert np.array_equal(run.input_used, s)
    again = es.run_reservoir(net, params, s)
    assert np.array_equal(run.states, again.states)


def test_unstable_run_is_truncated_not_raised():
    net = es.build_network(seed=2, nodes=15, sigma=0.5)
    params = es.ReservoirParams()
    params.kind = es.ReservoirKind.MAP
    params.alpha = 3.0
    params.p3 = 2.0
    s = np.sin(np.arange(500.0))
    run = es.run_reservoir(net, params, s)
    assert not run.stable
    assert run.divergence_step >= 0
    assert run.states.shape[0] == run.divergence_step + 1


def test_readout_learns_an_in_span_target():
    net, params, run, s = stable_run(seed=3)
    w = np.linspace(-1.0, 1.0, 20)
    g = run.states @ w
    window = es.FitWindow()
    window.discard, window.fit = 200, 900
    fit = es.train_readout(run, g, 1e-12, window)
    assert fit.delta_rc < 1e-6
    assert es.evaluate_readout(fit.model, run, g) < 1e-6


def test_lorenz_trajectory_and_spectrum():
    traj = es.lorenz_trajectory(n_steps=20000, transient=5000, seed=3)
    assert traj.states.shape == (20000, 3)
    assert traj.dt == pytest.approx(0.02)
    assert traj.input.mean() == pytest.approx(0.0, abs=1e-9)
    assert np.array_equal(traj.target, traj.states[:, 2])

    rep = es.lorenz_lyapunov(traj.states)
    lam = rep.exponents
    assert len(lam) == 3
    assert 0.7 < lam[0] < 1.1
    assert abs(sum(lam) + 41.0 / 3.0) < 0.15
    assert 1.9 < rep.d_ky < 2.2
    assert rep.max_local >= lam[0]


def test_reservoir_lyapunov_contracts_below_the_edge():
    net, params, run, _ = stable_run(seed=4, steps=3000)
    opts = es.LyapunovOptions()
    opts.k = 4
    rep = es.reservoir_lyapunov(net, params, run, opts)
    assert len(rep.exponents) == 4
    assert rep.exponents[0] < 0.0  # driven map is stable here
    assert rep.exponents == sorted(rep.exponents, reverse=True)
    assert rep.max_local >= rep.exponents[0]


def test_entropy_matches_ordinal_definition():
    mono = np.arange(50.0).reshape(-1, 1)
    rep = es.ordinal_entropy(mono, window=4)
    assert rep.H == 0.0
    assert rep.n_symbols == 1

    rng = np.random.default_rng(0)
    walk = np.cumsum(rng.normal(size=(300, 3)), axis=0)
    raw = es.ordinal_entropy(walk, window=3)
    warped = es.ordinal_entropy(np.exp(walk), window=3)
    assert raw.H == pytest.approx(warped.H, abs=1e-14)
    assert raw.n_symbols == warped.n_symbols
    assert raw.H <= math.log(raw.n_symbols) + 1e-12


def test_continuity_separates_structure_from_shuffle():
    traj = es.lorenz_trajectory(n_steps=3000, transient=5000, seed=7)
    x = traj.states
    params = es.ContinuityParams()
    params.n_ref = 50
    assert es.continuity_stat(x, x, params).psi >= 0.9
    rng = np.random.default_rng(1)
    shuffled = x[rng.permutation(len(x))]
    assert es.continuity_stat(x, shuffled, params).psi <= 0.25


def test_spectral_difference_two_tone_value():
    n = 2048
    t = np.arange(n)
    g = 2.0 * np.sin(2.0 * np.pi * 256 * t / n)
    r = np.sin(2.0 * np.pi * 64 * t / n).reshape(-1, 1)
    rep = es.spectral_difference(g, r)
    assert rep.delta_f == pytest.approx(-0.09375, abs=1e-9)
    assert rep.guard_hits == 0
    rep_same = es.spectral_difference(g, g.reshape(-1, 1))
    assert rep_same.delta_f == 0.0
    assert rep_same.guard_hits == 1


def test_ridge_solve_matches_numpy():
    rng = np.random.default_rng(2)
    r = rng.normal(size=(120, 8))
    g = rng.normal(size=120)
    lambda_rel = 1e-6
    c = es.ridge_solve(r, g, lambda_rel)
    lam = lambda_rel * np.trace(r.T @ r) / 8.0
    expect = np.linalg.solve(r.T @ r + lam * np.eye(8), r.T @ g)
    assert np.allclose(c, expect, atol=1e-10)


def test_small_sweep_round_trip():
    cfg = es.SweepConfig()
    cfg.driver.kind = es.DriverKind.Map3d
    cfg.driver.transient = 300
    cfg.reservoir_kind = es.ReservoirKind.MAP
    cfg.M = 10
    cfg.sigma = 0.5
    cfg.p1 = cfg.p2 = cfg.p3 = 0.5
    cfg.swept = "alpha"
    cfg.grid.auto_range = False
    cfg.grid.lo, cfg.grid.hi, cfg.grid.n_points = 0.05, 0.6, 4
    cfg.seeds = [1, 2]
    cfg.train_window.discard, cfg.train_window.fit = 100, 900
    cfg.test_window.discard, cfg.test_window.fit = 100, 900
    cfg.diag.enable.lyapunov = False
    cfg.diag.enable.max_local = False
    cfg.diag.enable.entropy = False
    cfg.diag.enable.continuity = False
    cfg.diag.enable.spectral = False

    records = es.run_sweep(cfg)
    assert len(records) == 8
    assert [r.seed for r in records] == [1] * 4 + [2] * 4
    assert any(r.stable for r in records)
    assert any(not r.stable for r in records)
    for r in records:
        if r.stable:
            assert r.delta_rc >= 0.0
        else:
            assert math.isinf(r.delta_tx)

    edge = es.find_edge(cfg, 0.01)
    assert cfg.grid.lo < edge < cfg.grid.hi


def test_figure_presets_are_exposed():
    assert es.figure_ids() == [f"fig{i}" for i in range(1, 9)]
    fig1 = es.figure_base_config("fig1set")
    assert fig1.M == 100
    assert fig1.swept == "p1"
    assert fig1.sigma == pytest.approx(0.28512)
    map_drive = es.figure_base_config("map_drive")
    assert map_drive.swept == "alpha"
    assert map_drive.p1 == pytest.approx(0.5)
    with pytest.raises(ValueError):
        es.figure_base_config("nonsense")


def test_errors_surface_as_python_exceptions():
    with pytest.raises(ValueError):
        es.build_network(seed=1, nodes=1, sigma=0.5)
    net, params, run, _ = stable_run(seed=6, steps=400)
    with pytest.raises(RuntimeError):
        window = es.FitWindow()
        window.discard, window.fit = 300, 500  # longer than the run
        es.train_readout(run, np.ones(400), 1e-8, window)
