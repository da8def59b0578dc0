import json

import numpy as np
import pytest

from sqptlab import channels, experiment, sic, sqpt
from sqptlab.channels import ChannelSpec
from sqptlab.errors import ArgumentError, ParseError

DEPOL = {"kind": "depolarizing", "d": 2, "q": 0.3}
AMP = {"kind": "amplitude-damping", "gamma": 0.4}


def test_simulate_is_deterministic():
    plan = experiment.ShotPlan(DEPOL, 1000, seed=3)
    a, b = experiment.simulate(plan), experiment.simulate(plan)
    assert np.array_equal(a.omega, b.omega)
    assert not np.array_equal(a.omega, experiment.simulate(plan, trial=1).omega)
    assert a.provenance["shots"] == 1000 and a.provenance["kind"] == "sampled"


@pytest.mark.parametrize("mode", experiment.MODES)
def test_sampled_omega_normalization(mode):
    w = experiment.simulate(experiment.ShotPlan(AMP, 500, seed=1, mode=mode)).omega
    assert abs(w.sum() - 2) < 1e-12
    if mode == "per-input":
        assert np.abs(w.sum(axis=0) - 0.5).max() < 1e-12
    # multiples of the shot resolution
    scale = 2 * 500 if mode == "joint" else 500 / 0.5
    assert np.abs(w * scale - np.round(w * scale)).max() < 1e-9


def test_shot_plan_validation():
    with pytest.raises(ArgumentError):
        experiment.ShotPlan(DEPOL, 0)
    with pytest.raises(ArgumentError):
        experiment.ShotPlan(DEPOL, 10, mode="adaptive")
    with pytest.raises(ArgumentError):
        experiment.resolve_povm("mub", 2)


def test_sampled_omega_is_unbiased():
    plan = experiment.ShotPlan(DEPOL, 10_000, seed=11)
    exact = sqpt.omega_exact(channels.make_channel(DEPOL), sic.sic_d2(), sic.sic_d2()).omega
    samples = np.array([experiment.simulate(plan, t).omega for t in range(1000)])
    sem = samples.std(axis=0, ddof=1) / np.sqrt(len(samples))
    assert np.all(np.abs(samples.mean(axis=0) - exact) < 5 * sem)


def test_sweep_matches_prediction():
    res = experiment.mse_sweep(DEPOL, [1000, 10_000, 100_000], trials=200, seed=1)
    for row in res.summary:
        assert abs(row["z"]) < 3
    assert abs(res.slope + 1) < 0.1


def test_prediction_value():
    rho = channels.choi(channels.depolarizing(2, 0.3))
    purity = float(np.trace(rho @ rho).real)
    pf = sqpt.product_frame(sic.sic_d2(), sic.sic_d2())
    assert sqpt.mse_prediction(pf, rho, 100) == pytest.approx((25 - purity) / 100, abs=1e-14)


def test_per_input_sweep_matches_prediction():
    res = experiment.mse_sweep(AMP, [1000, 10_000], trials=400, seed=2, mode="per-input")
    for row in res.summary:
        assert abs(row["z"]) < 4


def test_modes_agree_on_large_samples():
    joint = experiment.mse_sweep(AMP, [100_000], trials=2, seed=0).chi_hat
    per = experiment.mse_sweep(AMP, [100_000], trials=2, seed=0, mode="per-input").chi_hat
    truth = channels.chi_c(channels.make_channel(AMP))
    assert np.abs(joint - truth).max() < 0.05
    assert np.abs(per - truth).max() < 0.05


def test_huge_shot_count_converges():
    res = experiment.mse_sweep(DEPOL, [10_000_000], trials=2, seed=0)
    truth = sqpt.werner_chi(2, 0.3)
    assert np.abs(res.chi_hat - truth).max() < 5e-3


def test_sweep_needs_two_trials():
    with pytest.raises(ArgumentError):
        experiment.mse_sweep(DEPOL, [100], trials=1)
    with pytest.raises(ArgumentError):
        experiment.mse_sweep(DEPOL, [], trials=3)


def test_threads_do_not_change_results():
    a = experiment.mse_sweep(DEPOL, [500, 5000], trials=20, seed=4)
    b = experiment.mse_sweep(DEPOL, [500, 5000], trials=20, seed=4, workers=4)
    assert a.summary == b.summary
    assert np.array_equal(a.chi_hat, b.chi_hat)


def test_report_round_trip(tmp_path):
    res = experiment.mse_sweep(DEPOL, [100, 1000], trials=5, seed=1)
    json_path, csv_path = experiment.write_report(res, tmp_path)
    data = experiment.read_report(json_path)
    assert data["sweep"] == res.summary
    assert ChannelSpec.from_dict(data["spec"]) == ChannelSpec.from_dict(DEPOL)
    assert np.array_equal(channels.pairs_to_matrix(data["chi_hat"]), res.chi_hat)
    assert data["min_eig"] == sqpt.chi_diagnostics(res.chi_hat)["min_eig"]
    lines = open(csv_path).read().splitlines()
    assert lines[0] == "shots,trial,sq_hs_error"
    assert len(lines) == 1 + 2 * 5
    again = experiment.write_report(experiment.mse_sweep(DEPOL, [100, 1000], trials=5, seed=1), tmp_path / "b")
    assert open(json_path, "rb").read() == open(again[0], "rb").read()


def test_read_report_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"spec": {\n  "kind": }')
    with pytest.raises(ParseError, match="line 2"):
        experiment.read_report(bad)
    res = experiment.mse_sweep(DEPOL, [100], trials=2)
    data = res.to_report()
    del data["min_eig"]
    path = tmp_path / "missing.json"
    path.write_text(json.dumps(data))
    with pytest.raises(ParseError, match="min_eig"):
        experiment.read_report(path)
