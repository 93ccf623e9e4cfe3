# src/core/experiments.py
"""
Experiment orchestration: flow comparison on a Gaussian target, mixture fits with
density grids, Bayesian logistic regression on UCI files and the f-divergence sweep.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np
import pandas as pd

from src.config.config import WORKERS
from src.config.run_config import RunConfig, build_family, build_target
from src.core.optimization import EVAL_STREAM_OFFSET, optimize
from src.core.trajectory import BLREntry, BLRReport, Trajectory
from src.divergences.f_divergence import NAMES, make_divergence
from src.families.mixture import MixtureParams
from src.families.noise import NoiseBatch
from src.flows.bw_ode import bw_rhs_hessian, bw_rhs_hessian_free, sarkka_rhs, scale_rhs
from src.flows.f_flow import distill_step, f_flow_vector_field
from src.flows.state import FlowState
from src.geometry.bures import bures_distance, geodesic
from src.geometry.submersion import dpi
from src.gradients.closed_form import gaussian_closed_form_path_gradient
from src.gradients.path import path_gradient
from src.targets.base import TargetDensity
from src.targets.checks import score_finite_diff_check
from src.targets.gaussian import GaussianTarget
from src.targets.mixture import three_mode_1d_mixture
from src.targets.rosenbrock import RosenbrockTarget
from src.targets.uci import load_uci_csv
from src.utils.errors import ConfigError
from src.utils.utils import provenance

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")

FLOW_METHODS = {
    "bbvi_rep": "reparam_kl",
    "bbvi_path": "path",
    "ode_euler": "ode_scale",
    "langevin": "langevin",
}

GRID_1D = (-6.0, 8.0, 1000)
GRID_2D_POINTS = 200
GRID_2D_BOX = (-5.0, 5.0, -5.0, 5.0)

BLR_DEFAULTS: Dict[str, Any] = {
    "family": {"type": "diag"},
    "learning_rate": 1e-3,
    "iterations": 5000,
    "mc_samples": 32,
    "w2_every": 100,
}

SWEEP_TARGET = {"name": "gaussian", "mean": [0.0, 0.0], "cov": [[0.5, 0.3], [0.3, 0.5]]}
SWEEP_FAMILY = {"type": "gaussian", "mean": [1.0, 0.5]}
SWEEP_DIVERGENCES = ("reverse_kl", "forward_kl", "chi2", "hellinger")


def ordered_map(fn: Callable[[T], R], items: Sequence[T], workers: int = WORKERS) -> List[R]:
    """Map fn over items on a thread pool; results come back in submission order."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


# ---------------------------------------------------------------- flow comparison

def ode_estimator(form: str) -> str:
    """Estimator name running the ODE in the given form."""
    return "ode_scale" if form == "scale" else f"ode_cov_{form}"


def run_flow_comparison(config: RunConfig) -> Dict[str, Trajectory]:
    """
    BBVI-rep, BBVI-path, a forward-Euler ODE in config.ode_form and a Langevin cloud, all
    from the same initial Gaussian and on the same time grid (Langevin dt = tau).

    BBVI-path and the scale ODE draw the same per-step noise, so with the default form
    their trajectories coincide.

    Raises:
        ConfigError: The target is not Gaussian or the family is not a full Gaussian.
    """
    target = build_target(config.target)
    if not isinstance(target, GaussianTarget):
        raise ConfigError("The flow comparison needs a Gaussian target")
    if config.family.get("type") != "gaussian":
        raise ConfigError("The flow comparison needs the full Gaussian family")
    init = build_family(config.family, target.dim, config.seed)
    logger.info(f"Flow comparison: tau={config.learning_rate}, N={config.mc_samples}, "
                f"{config.iterations} steps, {config.particle_count} particles, ODE form {config.ode_form}")
    bundle: Dict[str, Trajectory] = {}
    for name, estimator in FLOW_METHODS.items():
        if name == "ode_euler":
            estimator = ode_estimator(config.ode_form)
        method_config = replace(config, estimator=estimator, divergence="reverse_kl", analytic=False)
        trajectory, _ = optimize(method_config, target, init)
        trajectory.name = name
        bundle[name] = trajectory
    return bundle


def run_flow_seed_sweep(config: RunConfig, seeds: Sequence[int], methods: Sequence[str] = ("bbvi_rep", "bbvi_path"),
                        workers: int = WORKERS) -> Dict[str, List[Trajectory]]:
    """Independent gradient runs per seed; lists are ordered like seeds."""
    unknown = [m for m in methods if m not in FLOW_METHODS]
    if unknown:
        raise ConfigError(f"Unknown flow methods: {', '.join(unknown)}")
    target = build_target(config.target)
    jobs = [(m, s) for m in methods for s in seeds]

    def run(job: Tuple[str, int]) -> Trajectory:
        method, seed = job
        return optimize(replace(config, estimator=FLOW_METHODS[method], seed=seed), target)[0]

    results = ordered_map(run, jobs, workers)
    return {m: results[i * len(seeds):(i + 1) * len(seeds)] for i, m in enumerate(methods)}


def terminal_w2_variance(trajectory: Trajectory, window: int = 500) -> float:
    """Variance of the W2 column over the last window recorded rows."""
    w2 = trajectory.column("w2_to_target")
    return float(np.var(w2[-window:]))


# ---------------------------------------------------------------- mixture fits

def _grid_points(dim: int, grid: Dict[str, Any]) -> Tuple[np.ndarray, List[str], float]:
    if dim == 1:
        lo, hi = grid.get("range", GRID_1D[:2])
        n = int(grid.get("points", GRID_1D[2]))
        xs = np.linspace(float(lo), float(hi), n)
        return xs[:, None], ["x"], float(xs[1] - xs[0])
    if dim == 2:
        x0, x1, y0, y1 = (float(v) for v in grid.get("box", GRID_2D_BOX))
        n = int(grid.get("points", GRID_2D_POINTS))
        xs, ys = np.linspace(x0, x1, n), np.linspace(y0, y1, n)
        gx, gy = np.meshgrid(xs, ys, indexing="ij")
        return np.column_stack([gx.ravel(), gy.ravel()]), ["x", "y"], float((xs[1] - xs[0]) * (ys[1] - ys[0]))
    raise ConfigError(f"Density grids are 1D or 2D; target has dimension {dim}")


def density_grid(params: MixtureParams, target: TargetDensity, grid: Optional[Dict[str, Any]] = None) -> pd.DataFrame:
    """
    Fitted and target densities on a regular grid: 1000 points on [-6, 8] in 1D,
    200 x 200 on grid["box"] in 2D. The target column is empty when its normalizer is unknown.

    The frame carries the cell volume in attrs["cell"].
    """
    points, names, cell = _grid_points(params.dim, grid or {})
    frame = pd.DataFrame(points, columns=names)
    frame["q_density"] = np.exp(params.log_density(points))
    if target.log_normalizer is not None:
        frame["p_density"] = np.exp(target.log_density(points))
    else:
        frame["p_density"] = np.nan
    frame.attrs["cell"] = cell
    return frame


def grid_total_variation(frame: pd.DataFrame) -> float:
    """0.5 * sum |q - p| * cell over the grid."""
    return float(0.5 * np.sum(np.abs(frame["q_density"] - frame["p_density"])) * frame.attrs["cell"])


def run_gmm_fit(config: RunConfig) -> Tuple[Trajectory, pd.DataFrame, MixtureParams]:
    """
    Fit a mixture with the mixture path estimator and dump its density on a grid.

    Returns:
        (trajectory, density grid, fitted mixture).
    """
    if config.family.get("type") != "mixture":
        raise ConfigError("gmm-fit needs a mixture family")
    target = build_target(config.target)
    trajectory, fitted = optimize(replace(config, estimator="path"), target)
    grid = density_grid(fitted, target, config.grid)
    if target.log_normalizer is not None:
        logger.info(f"Mixture fit: grid total variation {grid_total_variation(grid):.4g}")
    return trajectory, grid, fitted


# ---------------------------------------------------------------- logistic regression

def blr_accuracy(target: Any, params: Any, test_features: np.ndarray, test_labels: np.ndarray,
                 seed: int, eval_seed: int, n_samples: int) -> float:
    """Accuracy of the posterior-averaged predictive thresholded at 0.5."""
    z = NoiseBatch.draw(seed, EVAL_STREAM_OFFSET + eval_seed, n_samples, params.dim)
    proba = target.predict_proba(test_features, params.sample(z))
    predictions = np.where(proba >= 0.5, 1.0, -1.0)
    return float(np.mean(predictions == test_labels))


def run_blr(config: RunConfig, methods: Optional[Sequence[Tuple[str, str]]] = None,
            workers: int = WORKERS) -> BLRReport:
    """
    Train a diagonal-Gaussian posterior per (estimator, divergence) method and report
    test accuracy as mean and std over config.eval_seeds evaluation seeds.

    Args:
        config: Run config with a "logistic" target spec.
        methods: (estimator, divergence) pairs; defaults to the config's own pair.
        workers: Threads for evaluation seeds.
    """
    spec = config.target
    if spec.get("name") != "logistic":
        raise ConfigError("blr needs a 'logistic' target with a dataset path")
    if "path" not in spec:
        raise ConfigError("blr needs a dataset 'path' in the logistic target")
    split = load_uci_csv(
        spec["path"],
        label_column=int(spec.get("label_column", -1)),
        split_seed=int(spec.get("split_seed", 0)),
        test_fraction=float(spec.get("test_fraction", 0.2)),
    )
    target = split.posterior(float(spec.get("prior_variance", 1.0)))
    dataset = spec.get("dataset", Path(spec["path"]).stem)
    report = BLRReport(header={"config": config.to_dict()}, provenance=provenance(config.to_dict()))
    for estimator, divergence in methods or [(config.estimator, config.divergence)]:
        run_config = replace(config, estimator=estimator, divergence=divergence, family={"type": "diag"})
        _, params = optimize(run_config, target)
        accuracies = ordered_map(
            lambda e: blr_accuracy(target, params, split.test_features, split.test_labels,
                                   config.seed, e, config.eval_samples),
            list(range(config.eval_seeds)),
            workers,
        )
        method = f"{run_config.divergence_obj().label} ({'path' if estimator == 'path' else estimator})"
        entry = BLREntry(dataset=dataset, method=method, test_accuracy_mean=float(np.mean(accuracies)),
                         test_accuracy_std=float(np.std(accuracies)), posterior_sample_count=config.eval_samples)
        logger.info(f"BLR {dataset} {method}: {entry.test_accuracy_mean:.3f} +/- {entry.test_accuracy_std:.3f}")
        report.add(entry)
    return report


# ---------------------------------------------------------------- divergence sweep

def run_divergence_sweep(config: RunConfig) -> Tuple[Dict[str, Trajectory], pd.DataFrame]:
    """
    Path and reparameterization runs for each f-divergence on the 2D toy target
    N(0, ((0.5, 0.3), (0.3, 0.5))) from N((1, 0.5), I).

    Returns:
        (trajectories keyed "<divergence>/<method>", combined frame with method columns).
    """
    base = replace(config, target=dict(SWEEP_TARGET), family=dict(SWEEP_FAMILY))
    target = build_target(base.target)
    runs: Dict[str, Trajectory] = {}
    frames = []
    for divergence in SWEEP_DIVERGENCES:
        rep = "reparam_kl" if divergence == "reverse_kl" else "reparam_f"
        for method, estimator in (("path", "path"), ("rep", rep)):
            # the toy target is normalized; shifted reparam_f weights carry a per-step scale
            shift = base.ratio_shift if method == "path" else False
            run = replace(base, divergence=divergence, estimator=estimator, ratio_shift=shift)
            trajectory, _ = optimize(run, target)
            trajectory.name = f"{divergence}/{method}"
            runs[trajectory.name] = trajectory
            frame = trajectory.to_frame()
            frame.insert(0, "method", method)
            frame.insert(0, "divergence", divergence)
            frames.append(frame)
    combined = pd.concat(frames, ignore_index=True)
    logger.info(f"Divergence sweep: {len(runs)} runs, {len(combined)} rows")
    return runs, combined


# ---------------------------------------------------------------- self checks

CHECK_TOLERANCE = 1e-10
SCORE_CHECK_TOLERANCE = 1e-6


def _relative(a: np.ndarray, b: np.ndarray) -> float:
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    return float(np.max(np.abs(a - b)) / max(1.0, float(np.max(np.abs(b)))))


def run_self_checks(seed: int = 0) -> pd.DataFrame:
    """
    Score finite differences on the built-in targets and the exact estimator identities.

    Returns:
        Frame with columns check, value, tolerance, passed.
    """
    rng = np.random.default_rng(seed)
    rows: List[Dict[str, Any]] = []

    def record(name: str, value: float, tolerance: float) -> None:
        rows.append({"check": name, "value": value, "tolerance": tolerance, "passed": bool(value <= tolerance)})

    gaussian = GaussianTarget([0.0, 0.0], [[0.8, 0.4], [0.4, 0.8]])
    for name, target in (("gaussian", gaussian), ("rosenbrock", RosenbrockTarget()),
                         ("mixture_1d", three_mode_1d_mixture())):
        point = rng.normal(size=target.dim)
        record(f"score/{name}", score_finite_diff_check(target, point), SCORE_CHECK_TOLERANCE)

    cov = np.array([[1.3, 0.2], [0.2, 0.7]])
    state = FlowState.from_covariance([0.5, -0.3], cov)
    params = state.params
    z = NoiseBatch.draw(seed, 0, 64, 2)
    reverse_kl = make_divergence("reverse_kl")

    generic = path_gradient(params, gaussian, reverse_kl, z)
    closed = gaussian_closed_form_path_gradient(params, gaussian, z)
    record("closed_form_vs_path", _relative(closed.flat(), generic.flat()), CHECK_TOLERANCE)

    tau = 0.01
    for div_name in NAMES:
        div = make_divergence(div_name, alpha=1.5) if div_name == "alpha" else make_divergence(div_name)
        distilled, _ = distill_step(params, gaussian, div, tau, z)
        path = path_gradient(params, gaussian, div, z)
        record(f"distill/{div.label}", _relative(distilled.flat(), tau * path.flat()), CHECK_TOLERANCE)

    x = params.sample(z)
    field = f_flow_vector_field(x, params, gaussian, reverse_kl)
    record("f_flow/reverse_kl", _relative(field, gaussian.score(x) - params.score(x)), CHECK_TOLERANCE)

    scale_state = FlowState.from_params(params)
    _, d_scale = scale_rhs(scale_state, gaussian, z)
    _, d_cov = bw_rhs_hessian_free(scale_state, gaussian, z)
    record("dpi_scale_vs_hessian_free", _relative(dpi(scale_state.matrix, d_scale), d_cov), CHECK_TOLERANCE)

    _, free = bw_rhs_hessian_free(state, gaussian)
    for name, rhs in (("hessian", bw_rhs_hessian), ("sarkka", sarkka_rhs)):
        _, other = rhs(state, gaussian)
        record(f"analytic_{name}_vs_hessian_free", _relative(other, free), CHECK_TOLERANCE)

    frame = pd.DataFrame(rows, columns=["check", "value", "tolerance", "passed"])
    logger.info(f"Self checks: {int(frame['passed'].sum())}/{len(frame)} passed")
    return frame


# ---------------------------------------------------------------- geodesic dump

def geodesic_table(a: Any, b: Any, points: int = 101) -> pd.DataFrame:
    """
    Sigma_t on the Bures-Wasserstein geodesic from A to B at `points` evenly spaced t,
    with B(A, Sigma_t), which grows linearly as t * B(A, B).
    """
    if points < 2:
        raise ConfigError(f"A geodesic dump needs at least 2 points, got {points}")
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    rows = []
    for t in np.linspace(0.0, 1.0, points):
        sigma = geodesic(a, b, float(t)).matrix
        row: Dict[str, Any] = {"t": float(t)}
        row.update({f"sigma_{i}{j}": float(sigma[i, j]) for i in range(n) for j in range(n)})
        row["bures_from_a"] = bures_distance(a, sigma)
        rows.append(row)
    return pd.DataFrame(rows)


def run_geodesic(config: RunConfig) -> pd.DataFrame:
    """Geodesic from the family covariance (default I) to the Gaussian target covariance."""
    if config.target.get("name") != "gaussian":
        raise ConfigError("The geodesic dump needs a Gaussian target")
    b = np.asarray(config.target["cov"], dtype=float)
    a = np.asarray(config.family.get("cov", np.eye(b.shape[0])), dtype=float)
    return geodesic_table(a, b, int(config.grid.get("points", 101)))
