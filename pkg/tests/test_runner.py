# tests/test_runner.py
import json
import os

import numpy as np
import pandas as pd
import pytest

from src.config.run_config import RunConfig, build_family, build_target, load_run_config
from src.core.app import EXIT_NUMERICAL, EXIT_OK, EXIT_USAGE, main, output_path
from src.core.experiments import (
    geodesic_table,
    grid_total_variation,
    run_blr,
    run_divergence_sweep,
    run_flow_comparison,
    run_flow_seed_sweep,
    run_gmm_fit,
    run_self_checks,
    terminal_w2_variance,
)
from src.core.optimization import optimize, run_vi
from src.core.trajectory import BLREntry, BLRReport, Trajectory, param_summary
from src.divergences.f_divergence import make_divergence
from src.families.gaussian import GaussianParams
from src.families.mixture import MixtureParams
from src.families.noise import NoiseBatch
from src.geometry.bures import bures_distance, w2_gaussian
from src.gradients.gmm import gmm_surrogate_gradient
from src.gradients.ratio import StopGradientRatio
from src.services.plot_data import emit_plot_data, load_plot_csv, load_trajectory_json
from src.targets.rosenbrock import RosenbrockTarget
from src.utils.errors import ConfigError, NumericalError

SHARP_TARGET = {"name": "gaussian", "mean": [0.0, 0.0], "cov": [[0.01, 0.0], [0.0, 0.01]]}
PARAM_COLUMNS = ["mean_0", "mean_1", "cov_00", "cov_01", "cov_10", "cov_11"]


def write_json(path, data):
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def write_logistic_csv(path, rows=200, seed=0):
    rng = np.random.default_rng(seed)
    features = rng.normal(size=(rows, 2))
    logits = features @ np.array([4.0, -3.0]) + 0.5
    labels = np.where(rng.uniform(size=rows) < 1.0 / (1.0 + np.exp(-logits)), "yes", "no")
    lines = ["f0,f1,label"] + [f"{a:.6f},{b:.6f},{c}" for (a, b), c in zip(features, labels)]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def row_gaussian(row):
    mean = np.array([row["mean_0"], row["mean_1"]])
    cov = np.array([[row["cov_00"], row["cov_01"]], [row["cov_10"], row["cov_11"]]])
    return mean, cov


def chi2_values(params, target, n=20_000):
    """(surrogate -E_q[r^2 - 1], chi2 estimate E_q[(r - 1)^2]) by component sampling, r = p~ / q."""
    ratio = StopGradientRatio(params, target)
    batches = [NoiseBatch.draw(11, k, n, params.dim) for k in range(params.n_components)]
    surrogate, divergence = 0.0, 0.0
    for k, (w, batch) in enumerate(zip(params.weights, batches)):
        log_r = ratio.log_r(params.component_sample(k, batch))
        surrogate -= w * float(np.mean(np.expm1(2.0 * log_r)))
        divergence += w * float(np.mean(np.expm1(log_r) ** 2))
    reported = gmm_surrogate_gradient(params, target, make_divergence("chi2"), batches).surrogate
    assert reported == pytest.approx(surrogate, rel=1e-12)
    return surrogate, divergence


#-------------------------------
# configuration
#-------------------------------
def test_default_config_is_the_illustration_run():
    config = RunConfig()
    assert config.learning_rate == 0.01
    assert config.mc_samples == 5
    assert config.iterations == 3000
    assert config.target["cov"] == [[0.8, 0.4], [0.4, 0.8]]
    assert config.family["mean"] == [4.0, 2.0]


@pytest.mark.parametrize("overrides", [
    {"learning_rate": 0.0},
    {"mc_samples": 0},
    {"iterations": 0},
    {"seed": -1},
    {"estimator": "adam"},
    {"divergence": "bogus"},
    {"target": {"name": "banana"}},
    {"family": {"type": "flow"}},
    {"estimator": "closed_form_gaussian", "family": {"type": "diag"}},
    {"estimator": "ode_scale", "family": {"type": "diag"}},
    {"estimator": "ode_cov_hessian", "analytic": True, "target": {"name": "rosenbrock"}},
    {"estimator": "reparam_kl", "family": {"type": "mixture", "components": 2}},
])
def test_config_validation(overrides):
    with pytest.raises(ConfigError):
        RunConfig(**overrides)


def test_load_run_config_layers(tmp_path):
    path = write_json(tmp_path / "run.json", {"learning_rate": 0.05, "iterations": 10, "seed": 4})
    config = load_run_config(path, {"seed": 9, "mc_samples": None}, {"mc_samples": 7, "iterations": 2})
    assert config.learning_rate == 0.05
    assert config.iterations == 10
    assert config.seed == 9
    assert config.mc_samples == 7


def test_load_run_config_rejects_unknown_keys(tmp_path):
    with pytest.raises(ConfigError, match="learning_rat"):
        load_run_config(write_json(tmp_path / "typo.json", {"learning_rat": 0.1}))
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.json")
    with pytest.raises(ConfigError):
        load_run_config(overrides={"momentum": 0.9})


def test_builders_report_bad_specs():
    with pytest.raises(ConfigError):
        build_target({"name": "gaussian", "mean": [0.0]})
    with pytest.raises(ConfigError):
        build_target({"name": "gaussian", "mean": [0.0, 0.0], "cov": [[1.0, 2.0], [2.0, 1.0]]})
    with pytest.raises(ConfigError):
        build_family({"type": "gaussian", "mean": [0.0]}, 2, 0)
    assert isinstance(build_target({"name": "rosenbrock"}), RosenbrockTarget)
    assert build_family({"type": "mixture", "components": 3}, 2, 0).n_components == 3


#-------------------------------
# trajectories and reports
#-------------------------------
def test_trajectory_rows(gaussian_params):
    trajectory = Trajectory(name="path")
    trajectory.append(0, 0.0, gaussian_params, w2_to_target=1.5)
    trajectory.append(1, 0.01, gaussian_params)
    assert trajectory.columns[:2] == ["step", "t"]
    assert set(PARAM_COLUMNS) <= set(trajectory.columns)
    assert trajectory.last()["w2_to_target"] is None
    assert np.isnan(trajectory.column("w2_to_target")[1])
    with pytest.raises(ValueError):
        trajectory.append(1, 0.02, gaussian_params)
    with pytest.raises(ValueError):
        trajectory.append(2, 0.02)
    with pytest.raises(NumericalError):
        trajectory.append(3, 0.03, gaussian_params, grad_norm=float("inf"))


def test_param_summary_of_mixture(gaussian_params):
    mixture = MixtureParams(logits=[0.0, 0.0], components=(gaussian_params, GaussianParams.standard([0.0, 0.0])))
    summary = param_summary(mixture)
    assert summary["w_0"] == pytest.approx(0.5)
    assert summary["w_0"] + summary["w_1"] == pytest.approx(1.0)
    assert "mean_1_0" in summary and "cov_0_01" in summary


def test_blr_entries_are_validated():
    with pytest.raises(ValueError):
        BLREntry("pima", "rkl", 1.2, 0.0, 32)
    with pytest.raises(ValueError):
        BLREntry("pima", "rkl", 0.7, -0.1, 32)
    report = BLRReport()
    report.add(BLREntry("pima", "rkl", 0.7, 0.01, 32))
    assert list(report.to_frame()["test_accuracy_mean"]) == [0.7]


#-------------------------------
# plot data
#-------------------------------
def test_empty_trajectory_gives_header_only_file(tmp_path):
    path = emit_plot_data(Trajectory(name="empty"), tmp_path / "empty.csv")
    lines = path.read_text(encoding="utf-8").split("\n")
    assert lines[0].startswith("# ")
    assert json.loads(lines[0][2:])["columns"] == ["step", "t"]
    assert lines[1:] == ["step,t", ""]


def test_csv_rows_have_constant_width(tmp_path, gaussian_params):
    trajectory = Trajectory(name="path", header={"config": {"seed": 0}})
    trajectory.append(0, 0.0, gaussian_params, w2_to_target=0.5)
    trajectory.append(5, 0.05, gaussian_params, grad_norm=1.0 / 3.0)
    path = emit_plot_data(trajectory, tmp_path / "out" / "traj.csv")
    body = path.read_text(encoding="utf-8").splitlines()[1:]
    assert len({line.count(",") for line in body}) == 1
    frame = load_plot_csv(path)
    assert frame["grad_norm"].iloc[1] == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert np.isnan(frame["grad_norm"].iloc[0])


def test_json_trajectory_round_trip(tmp_path, gaussian_params):
    trajectory = Trajectory(name="path", provenance="abc")
    trajectory.append(0, 0.0, gaussian_params, w2_to_target=np.pi)
    trajectory.append(1, 0.1, gaussian_params, w2_to_target=np.e / 7.0)
    loaded = load_trajectory_json(emit_plot_data(trajectory, tmp_path / "traj.json"))
    assert loaded.rows == trajectory.rows
    assert loaded.columns == trajectory.columns
    assert loaded.name == "path" and loaded.provenance == "abc"


def test_plot_data_rejects_unknown_format(tmp_path):
    with pytest.raises(ConfigError):
        emit_plot_data(pd.DataFrame({"x": [1.0]}), tmp_path / "grid.parquet")


def test_output_path_resolution():
    assert output_path(RunConfig(output="runs"), "fit").as_posix() == "runs/fit.csv"
    assert output_path(RunConfig(output="runs"), "fit", "_params").as_posix() == "runs/fit_params.csv"
    assert output_path(RunConfig(output="out/x.json"), "fit").as_posix() == "out/x.json"
    assert output_path(RunConfig(output="out/x.csv"), "fit", "_grid").as_posix() == "out/x_grid.csv"


#-------------------------------
# optimization
#-------------------------------
def test_path_descent_converges_without_variance():
    trajectory = run_vi(RunConfig())
    assert trajectory.last()["step"] == 3000
    assert trajectory.last()["t"] == pytest.approx(30.0)
    assert trajectory.last()["w2_to_target"] < 1e-4


def test_run_at_target_stays_put(illustration_target):
    config = RunConfig(iterations=50)
    trajectory = run_vi(config, illustration_target, illustration_target.as_params())
    w2 = trajectory.column("w2_to_target")
    assert np.all(w2 == w2[0]) and w2[0] < 1e-7
    assert np.all(trajectory.column("grad_norm")[:-1] == 0.0)
    assert len(set(trajectory.column("mean_0"))) == 1


def test_runs_are_deterministic():
    config = RunConfig(iterations=100, estimator="reparam_kl", seed=3)
    first, second = run_vi(config), run_vi(config)
    pd.testing.assert_frame_equal(first.to_frame(), second.to_frame())
    assert first.provenance == second.provenance


def test_closed_form_and_path_runs_are_identical():
    path = run_vi(RunConfig(iterations=200, estimator="path"))
    closed = run_vi(RunConfig(iterations=200, estimator="closed_form_gaussian"))
    for column in PARAM_COLUMNS + ["w2_to_target", "grad_norm"]:
        np.testing.assert_array_equal(path.column(column), closed.column(column))


def test_record_interval_and_divergence_estimates():
    trajectory = run_vi(RunConfig(iterations=25, w2_every=10, divergence_eval_every=20))
    assert [r["step"] for r in trajectory.rows] == [0, 10, 20, 25]
    estimates = trajectory.column("div_estimate")
    assert np.isfinite(estimates[[0, 2]]).all()
    assert np.isnan(estimates[[1, 3]]).all()
    assert np.isnan(trajectory.column("grad_norm")[-1])


def test_distillation_run_matches_path_run():
    path = run_vi(RunConfig(iterations=100, estimator="path", divergence="chi2"))
    distill = run_vi(RunConfig(iterations=100, estimator="distill", divergence="chi2"))
    np.testing.assert_allclose(distill.column("mean_0"), path.column("mean_0"), rtol=1e-9)


def test_ode_failure_carries_step_and_state():
    config = RunConfig(target=SHARP_TARGET, family={"type": "gaussian"}, estimator="ode_cov_hessian_free",
                       analytic=True, learning_rate=1.0, iterations=5)
    with pytest.raises(NumericalError) as info:
        optimize(config)
    assert info.value.step == 0
    assert info.value.state["variant"] == "cov"


def test_langevin_run_records_fits():
    trajectory, fit = optimize(RunConfig(estimator="langevin", iterations=20, particle_count=200, w2_every=5))
    assert [r["step"] for r in trajectory.rows] == [0, 5, 10, 15, 20]
    assert fit.mean.shape == (2,)


def test_single_component_mixture_recovers_gaussian(illustration_target):
    config = RunConfig(family={"type": "mixture", "components": 1}, mc_samples=20, w2_every=100)
    trajectory, fitted = optimize(config)
    component = fitted.components[0]
    np.testing.assert_allclose(component.mean, illustration_target.mean, atol=0.05)
    np.testing.assert_allclose(component.covariance, illustration_target.covariance, atol=0.05)
    assert np.all(trajectory.column("w_0") == 1.0)


#-------------------------------
# experiments
#-------------------------------
def test_flow_comparison_path_and_ode_coincide():
    bundle = run_flow_comparison(RunConfig(iterations=30, mc_samples=10, particle_count=100))
    assert list(bundle) == ["bbvi_rep", "bbvi_path", "ode_euler", "langevin"]
    assert {len(t) for t in bundle.values()} == {31}
    for column in PARAM_COLUMNS + ["w2_to_target"]:
        np.testing.assert_allclose(bundle["ode_euler"].column(column), bundle["bbvi_path"].column(column),
                                   rtol=1e-10, atol=1e-12)
    np.testing.assert_allclose(bundle["langevin"].column("t"), bundle["ode_euler"].column("t"))


def test_flow_comparison_needs_gaussian_target():
    with pytest.raises(ConfigError):
        run_flow_comparison(RunConfig(target={"name": "rosenbrock"}, family={"type": "gaussian"}))


def test_seed_sweep_is_independent_of_workers():
    config = RunConfig(iterations=40)
    serial = run_flow_seed_sweep(config, [0, 1, 2], workers=1)
    threaded = run_flow_seed_sweep(config, [0, 1, 2], workers=3)
    for method in serial:
        for a, b in zip(serial[method], threaded[method]):
            pd.testing.assert_frame_equal(a.to_frame(), b.to_frame())
    with pytest.raises(ConfigError):
        run_flow_seed_sweep(config, [0], methods=["svgd"])


def test_gmm_fit_dumps_density_grid():
    config = RunConfig(target={"name": "mixture_1d"}, family={"type": "mixture", "components": 2},
                       divergence="forward_kl", iterations=30, w2_every=10)
    trajectory, grid, fitted = run_gmm_fit(config)
    assert len(grid) == 1000
    assert grid["x"].iloc[0] == -6.0 and grid["x"].iloc[-1] == 8.0
    assert grid["q_density"].sum() * grid.attrs["cell"] <= 1.0 + 1e-3
    weights = trajectory.to_frame()[["w_0", "w_1"]].sum(axis=1)
    np.testing.assert_allclose(weights, 1.0, atol=1e-12)
    assert 0.0 <= grid_total_variation(grid) <= 1.0 + 1e-3


def test_gmm_fit_needs_mixture_family():
    with pytest.raises(ConfigError):
        run_gmm_fit(RunConfig())


def test_divergence_sweep_layout():
    runs, combined = run_divergence_sweep(RunConfig(iterations=20))
    assert len(runs) == 8
    assert set(combined["method"]) == {"path", "rep"}
    assert set(combined["divergence"]) == {"reverse_kl", "forward_kl", "chi2", "hellinger"}
    assert len(combined) == 8 * 21
    assert np.isfinite(combined["w2_to_target"]).all()


def test_self_checks_pass():
    checks = run_self_checks(seed=0)
    assert checks["passed"].all(), checks.loc[~checks["passed"]]
    assert {"closed_form_vs_path", "f_flow/reverse_kl", "dpi_scale_vs_hessian_free"} <= set(checks["check"])


def test_geodesic_table_grows_linearly():
    a, b = np.eye(2), np.array([[0.8, 0.4], [0.4, 0.8]])
    table = geodesic_table(a, b, points=11)
    total = bures_distance(a, b)
    np.testing.assert_allclose(table["bures_from_a"], table["t"] * total, atol=1e-7)
    assert table["sigma_01"].iloc[-1] == 0.4
    with pytest.raises(ConfigError):
        geodesic_table(a, b, points=1)


def test_blr_on_synthetic_data(tmp_path):
    csv = write_logistic_csv(tmp_path / "toy.csv")
    config = RunConfig(target={"name": "logistic", "path": str(csv)}, family={"type": "diag"},
                       learning_rate=1e-3, iterations=500, mc_samples=16, w2_every=100, eval_seeds=3)
    report = run_blr(config, methods=[("path", "reverse_kl"), ("reparam_kl", "reverse_kl")])
    frame = report.to_frame()
    assert list(frame["dataset"]) == ["toy", "toy"]
    assert (frame["test_accuracy_mean"] > 0.75).all()
    assert (frame["posterior_sample_count"] == 32).all()
    threaded = run_blr(config, methods=[("path", "reverse_kl")], workers=3).to_frame()
    assert threaded["test_accuracy_mean"].iloc[0] == frame["test_accuracy_mean"].iloc[0]


def test_blr_needs_logistic_target():
    with pytest.raises(ConfigError):
        run_blr(RunConfig())


def test_blr_config_mistakes_are_config_errors(tmp_path):
    with pytest.raises(ConfigError, match="path"):
        run_blr(RunConfig(target={"name": "logistic"}, family={"type": "diag"}))
    csv = write_logistic_csv(tmp_path / "toy.csv")
    with pytest.raises(ConfigError, match="test_fraction"):
        run_blr(RunConfig(target={"name": "logistic", "path": str(csv), "test_fraction": 1.5},
                          family={"type": "diag"}))
    config = write_json(tmp_path / "no_path.json", {"target": {"name": "logistic"}})
    assert main(["blr", "--config", str(config), "--out", str(tmp_path)]) == EXIT_USAGE


#-------------------------------
# command line
#-------------------------------
def test_cli_fit_writes_trajectory_and_params(tmp_path, capsys):
    out = tmp_path / "fit.csv"
    assert main(["fit", "--steps", "20", "--out", str(out)]) == EXIT_OK
    assert out.exists()
    params = json.loads((tmp_path / "fit_params.json").read_text(encoding="utf-8"))
    assert params["family"] == "gaussian"
    assert str(out) in capsys.readouterr().out


def test_cli_output_is_byte_identical(tmp_path):
    out = tmp_path / "run.json"
    args = ["fit", "--steps", "30", "--estimator", "reparam_kl", "--seed", "5", "--out", str(out)]
    assert main(args) == EXIT_OK
    first = out.read_bytes()
    assert main(args) == EXIT_OK
    assert out.read_bytes() == first


def test_cli_usage_errors(tmp_path):
    assert main(["fit", "--lr", "-1", "--out", str(tmp_path / "a.csv")]) == EXIT_USAGE
    assert main(["fit", "--divergence", "alpha:x", "--out", str(tmp_path / "b.csv")]) == EXIT_USAGE
    bad = write_json(tmp_path / "bad.json", {"steps": 10})
    assert main(["fit", "--config", str(bad)]) == EXIT_USAGE
    with pytest.raises(SystemExit) as info:
        main(["plot"])
    assert info.value.code == EXIT_USAGE


def test_cli_numerical_failure(tmp_path):
    config = write_json(tmp_path / "sharp.json", {
        "target": SHARP_TARGET, "family": {"type": "gaussian"}, "estimator": "ode_cov_hessian_free",
        "analytic": True, "learning_rate": 1.0, "iterations": 5, "output": str(tmp_path / "sharp.csv"),
    })
    assert main(["fit", "--config", str(config)]) == EXIT_NUMERICAL


def test_cli_check_and_geodesic(tmp_path):
    assert main(["check", "--out", str(tmp_path / "checks.csv")]) == EXIT_OK
    assert load_plot_csv(tmp_path / "checks.csv")["passed"].all()
    assert main(["geodesic", "--out", str(tmp_path)]) == EXIT_OK
    table = load_plot_csv(tmp_path / "geodesic.csv")
    assert len(table) == 101
    assert table["t"].iloc[-1] == 1.0


def test_cli_flow_demo_writes_four_files(tmp_path):
    config = write_json(tmp_path / "demo.json", {"iterations": 10, "mc_samples": 8, "particle_count": 50})
    assert main(["flow-demo", "--config", str(config), "--out", str(tmp_path)]) == EXIT_OK
    names = sorted(p.name for p in tmp_path.glob("flow_demo_*.csv"))
    assert names == ["flow_demo_bbvi_path.csv", "flow_demo_bbvi_rep.csv", "flow_demo_langevin.csv",
                     "flow_demo_ode_euler.csv"]


def test_cli_flow_demo_form_flag(tmp_path):
    config = write_json(tmp_path / "demo.json", {"iterations": 10, "mc_samples": 8, "particle_count": 50})
    assert main(["flow-demo", "--config", str(config), "--form", "sarkka", "--out", str(tmp_path)]) == EXIT_OK
    assert len(load_plot_csv(tmp_path / "flow_demo_ode_euler.csv")) == 11
    bundle = run_flow_comparison(RunConfig(iterations=5, mc_samples=8, particle_count=20, ode_form="hessian"))
    assert bundle["ode_euler"].header["config"]["estimator"] == "ode_cov_hessian"
    with pytest.raises(SystemExit) as info:
        main(["flow-demo", "--form", "midpoint"])
    assert info.value.code == EXIT_USAGE
    with pytest.raises(SystemExit):
        main(["fit", "--form", "sarkka"])
    with pytest.raises(ConfigError):
        RunConfig(ode_form="midpoint")


#-------------------------------
# acceptance-size runs
#-------------------------------
@pytest.mark.slow
def test_flow_comparison_at_full_size():
    bundle = run_flow_comparison(RunConfig(mc_samples=100, w2_every=100))
    for trajectory in bundle.values():
        assert trajectory.last()["w2_to_target"] < 0.2
    for column in PARAM_COLUMNS:
        np.testing.assert_allclose(bundle["ode_euler"].column(column), bundle["bbvi_path"].column(column),
                                   rtol=1e-10, atol=1e-12)
    for ode_row, cloud_row in zip(bundle["ode_euler"].rows, bundle["langevin"].rows):
        assert ode_row["step"] == cloud_row["step"]
        assert w2_gaussian(row_gaussian(ode_row), row_gaussian(cloud_row)) < 0.15


@pytest.mark.slow
def test_path_gradient_sticks_the_landing():
    sweep = run_flow_seed_sweep(RunConfig(), seeds=range(5))
    rep = np.mean([terminal_w2_variance(t) for t in sweep["bbvi_rep"]])
    path = np.mean([terminal_w2_variance(t) for t in sweep["bbvi_path"]])
    assert rep > 10.0 * path


@pytest.mark.slow
def test_forward_kl_mixture_fit_on_three_modes():
    config = RunConfig(target={"name": "mixture_1d"}, family={"type": "mixture", "components": 4},
                       divergence="forward_kl", iterations=10000, mc_samples=20, w2_every=100)
    _, grid, _ = run_gmm_fit(config)
    assert grid_total_variation(grid) < 0.15


ROSENBROCK_FAMILY = {"type": "mixture", "components": 5, "component_scale": 2.0,
                     "means": [[-1.0, 1.0], [0.0, 0.0], [1.0, 1.0], [2.0, 4.0], [0.5, 2.0]]}


@pytest.mark.slow
def test_chi2_mixture_on_rosenbrock_improves_its_surrogate():
    config = RunConfig(target={"name": "rosenbrock"}, family=ROSENBROCK_FAMILY,
                       divergence="chi2", iterations=10000, w2_every=100, grid={"points": 50})
    target = build_target(config.target)
    initial = build_family(config.family, 2, config.seed)
    trajectory, grid, fitted = run_gmm_fit(config)
    frame = trajectory.to_frame()
    assert np.isfinite(frame.filter(regex="^(w|mean|cov)_").values).all()
    assert np.isfinite(frame["surrogate"].iloc[:-1].astype(float)).all()
    assert np.isfinite(grid["q_density"]).all()
    surrogate_0, chi2_0 = chi2_values(initial, target)
    surrogate_1, chi2_1 = chi2_values(fitted, target)
    assert chi2_1 < chi2_0
    # -E_q[r^2 - 1] = 2 - 2C - chi2 with E_q[r] = C, so the shift-free surrogate rises as chi2 falls
    assert surrogate_1 > surrogate_0


UCI_CASES = [("PIMA_CSV", 0.74), ("HEART_CSV", 0.82)]


@pytest.mark.uci
@pytest.mark.parametrize("env,threshold", UCI_CASES, ids=["pima", "heart"])
def test_blr_on_uci_files(env, threshold):
    path = os.getenv(env)
    if not path:
        pytest.skip(f"{env} is not set")
    config = RunConfig(target={"name": "logistic", "path": path}, family={"type": "diag"},
                       learning_rate=1e-3, iterations=5000, mc_samples=32, w2_every=500)
    frame = run_blr(config, methods=[("path", "reverse_kl"), ("reparam_kl", "reverse_kl")]).to_frame()
    path_acc, rep_acc = frame["test_accuracy_mean"]
    assert path_acc >= threshold
    assert abs(path_acc - rep_acc) <= 0.03
