# src/config/run_config.py
"""
Run configuration: the RunConfig dataclass, JSON loading with command-line overrides,
and builders turning the target/family/divergence sub-specs into objects.
"""

import logging
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Any, Dict, Optional, Union

import numpy as np
from scipy.linalg import LinAlgError, cholesky

from src.config.config import (
    BLR_EVAL_SAMPLES,
    BLR_EVAL_SEEDS,
    DEFAULT_ITERATIONS,
    DEFAULT_LEARNING_RATE,
    DEFAULT_MC_SAMPLES,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_SEED,
)
from src.divergences.f_divergence import FDivergence, parse_divergence
from src.families.diagonal import DiagGaussianParams
from src.families.gaussian import GaussianParams
from src.families.mixture import init_mixture
from src.targets.base import TargetDensity
from src.targets.gaussian import GaussianTarget
from src.targets.mixture import MixtureTarget, three_mode_1d_mixture
from src.targets.rosenbrock import RosenbrockTarget
from src.targets.uci import load_uci_csv
from src.utils.errors import ConfigError, NumericalError
from src.utils.utils import load_json_object

logger = logging.getLogger(__name__)

ESTIMATORS = (
    "reparam_kl",
    "reparam_f",
    "path",
    "closed_form_gaussian",
    "distill",
    "ode_cov_hessian_free",
    "ode_cov_hessian",
    "ode_cov_sarkka",
    "ode_scale",
    "langevin",
)
ODE_FORM_NAMES = ("hessian_free", "hessian", "sarkka", "scale")
FAMILIES = ("gaussian", "diag", "mixture")
TARGETS = ("gaussian", "rosenbrock", "mixture", "mixture_1d", "logistic")

# Target N((0,0), ((0.8,0.4),(0.4,0.8))) from initial N((4,2), I)
ILLUSTRATION_TARGET = {"name": "gaussian", "mean": [0.0, 0.0], "cov": [[0.8, 0.4], [0.4, 0.8]]}
ILLUSTRATION_FAMILY = {"type": "gaussian", "mean": [4.0, 2.0]}


@dataclass
class RunConfig:
    """
    One run, fully determined by its fields (seeds included).

    Attributes:
        target: {"name": ..., parameters} or a dataset spec for "logistic".
        family: {"type": "gaussian" | "diag" | "mixture", initialization}.
        divergence: "reverse_kl", "forward_kl", "chi2", "hellinger" or "alpha:<value>".
        estimator: One of ESTIMATORS.
        learning_rate: Step size tau > 0.
        mc_samples: Monte Carlo samples N per step (per component for mixtures).
        iterations: Number of steps.
        seed: Root seed for every noise stream.
        ratio_shift: Shift log-ratios by their maximum before exponentiating.
        output: Output file or directory.
        w2_every: Record W2 to a Gaussian target every this many steps.
        divergence_eval_every: Record a divergence estimate every this many steps (0 = off).
        particle_count: Particles for Langevin runs.
        analytic: Closed-form expectations for ODE estimators (Gaussian targets).
        ode_form: Bures-Wasserstein ODE form used by the flow comparison.
        grid: Density-grid options for mixture fits.
        eval_samples: Posterior samples per BLR prediction.
        eval_seeds: Evaluation seeds for BLR accuracy mean/std.
    """

    target: Dict[str, Any] = field(default_factory=lambda: dict(ILLUSTRATION_TARGET))
    family: Dict[str, Any] = field(default_factory=lambda: dict(ILLUSTRATION_FAMILY))
    divergence: str = "reverse_kl"
    estimator: str = "path"
    learning_rate: float = DEFAULT_LEARNING_RATE
    mc_samples: int = DEFAULT_MC_SAMPLES
    iterations: int = DEFAULT_ITERATIONS
    seed: int = DEFAULT_SEED
    ratio_shift: bool = True
    output: str = DEFAULT_OUTPUT_DIR
    w2_every: int = 1
    divergence_eval_every: int = 0
    particle_count: int = 10000
    analytic: bool = False
    ode_form: str = "scale"
    grid: Dict[str, Any] = field(default_factory=dict)
    eval_samples: int = BLR_EVAL_SAMPLES
    eval_seeds: int = BLR_EVAL_SEEDS

    def __post_init__(self) -> None:
        self.validate()

    def validate(self) -> None:
        """
        Raises:
            ConfigError: Invalid values or incompatible estimator/family/target.
        """
        try:
            assert self.learning_rate > 0, f"learning_rate must be positive, got {self.learning_rate}"
            assert self.mc_samples >= 1, f"mc_samples must be >= 1, got {self.mc_samples}"
            assert self.iterations >= 1, f"iterations must be >= 1, got {self.iterations}"
            assert self.seed >= 0, f"seed must be non-negative, got {self.seed}"
            assert self.w2_every >= 1, f"w2_every must be >= 1, got {self.w2_every}"
            assert self.divergence_eval_every >= 0, "divergence_eval_every must be >= 0"
            assert self.particle_count >= 1, f"particle_count must be >= 1, got {self.particle_count}"
            assert self.eval_samples >= 1 and self.eval_seeds >= 1, "eval_samples and eval_seeds must be >= 1"
            assert self.ode_form in ODE_FORM_NAMES, \
                f"Unknown ODE form '{self.ode_form}'; expected one of {', '.join(ODE_FORM_NAMES)}"
            assert self.estimator in ESTIMATORS, \
                f"Unknown estimator '{self.estimator}'; expected one of {', '.join(ESTIMATORS)}"
            assert isinstance(self.target, dict) and self.target.get("name") in TARGETS, \
                f"Unknown target {self.target!r}; expected name in {', '.join(TARGETS)}"
            assert isinstance(self.family, dict) and self.family.get("type") in FAMILIES, \
                f"Unknown family {self.family!r}; expected type in {', '.join(FAMILIES)}"
        except AssertionError as e:
            logger.error(f"Invalid run configuration: {e}")
            raise ConfigError(str(e))

        family = self.family["type"]
        target = self.target["name"]
        if self.estimator == "closed_form_gaussian" and family != "gaussian":
            raise ConfigError("closed_form_gaussian requires the full Gaussian family")
        if self.estimator.startswith("ode_") or self.estimator == "langevin":
            if family != "gaussian":
                raise ConfigError(f"{self.estimator} evolves a full Gaussian state; set family type 'gaussian'")
            if self.analytic and target != "gaussian":
                raise ConfigError("Closed-form ODE expectations require a Gaussian target")
        if family == "mixture" and self.estimator != "path":
            raise ConfigError("Mixture families are trained with the path estimator only")
        self.divergence_obj()

    def divergence_obj(self) -> FDivergence:
        return parse_divergence(self.divergence)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


FIELD_NAMES = tuple(f.name for f in fields(RunConfig))


def load_run_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
    defaults: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """
    Build a RunConfig from defaults, then a flat JSON file, then command-line overrides.

    Args:
        path: Optional JSON object file whose keys are RunConfig field names.
        overrides: Values from command-line flags; None entries are ignored.
        defaults: Preset values of the invoking subcommand.

    Raises:
        ConfigError: Unreadable file, unknown keys or invalid values.
    """
    merged: Dict[str, Any] = dict(defaults or {})
    if path is not None:
        data = load_json_object(path)
        unknown = sorted(set(data) - set(FIELD_NAMES))
        if unknown:
            logger.error(f"Unknown config keys in {path}: {unknown}")
            raise ConfigError(f"Unknown config keys in {path}: {', '.join(unknown)}")
        merged.update(data)
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    unknown = sorted(set(merged) - set(FIELD_NAMES))
    if unknown:
        raise ConfigError(f"Unknown config keys: {', '.join(unknown)}")
    try:
        config = RunConfig(**merged)
    except TypeError as e:
        logger.error(f"Malformed run configuration: {e}")
        raise ConfigError(f"Malformed run configuration: {e}")
    logger.info(f"Run config: estimator={config.estimator}, divergence={config.divergence}, "
                f"target={config.target.get('name')}, lr={config.learning_rate}, N={config.mc_samples}, "
                f"iterations={config.iterations}, seed={config.seed}")
    return config


def build_target(spec: Dict[str, Any]) -> TargetDensity:
    """
    Construct the target named by spec["name"].

    Raises:
        ConfigError: Missing or malformed parameters.
    """
    name = spec.get("name")
    try:
        if name == "gaussian":
            return GaussianTarget(spec["mean"], spec["cov"])
        if name == "rosenbrock":
            return RosenbrockTarget(a=spec.get("a", 1.0), b=spec.get("b", 1.0), mu=spec.get("mu", 1.0))
        if name == "mixture":
            return MixtureTarget.from_moments(spec["weights"], spec["means"], spec["covs"])
        if name == "mixture_1d":
            return three_mode_1d_mixture()
        if name == "logistic":
            split = load_uci_csv(
                spec["path"],
                label_column=int(spec.get("label_column", -1)),
                split_seed=int(spec.get("split_seed", 0)),
                test_fraction=float(spec.get("test_fraction", 0.2)),
            )
            return split.posterior(float(spec.get("prior_variance", 1.0)))
    except KeyError as e:
        logger.error(f"Target '{name}' is missing parameter {e}")
        raise ConfigError(f"Target '{name}' is missing parameter {e}")
    except NumericalError as e:
        raise ConfigError(f"Invalid parameters for target '{name}': {e}")
    raise ConfigError(f"Unknown target '{name}'")


def build_family(spec: Dict[str, Any], dim: int, seed: int) -> Any:
    """
    Initial variational parameters for the family spec.

    gaussian: "mean" (default zeros) and "scale" or "cov" (default I).
    diag: "mean" and "log_std" (defaults zeros).
    mixture: "components" K, "mean_std" (default 2.0), "diagonal", and optionally
        "component_scale" (default 1.0) and explicit "means".
    """
    kind = spec.get("type")
    mean = np.asarray(spec.get("mean", np.zeros(dim)), dtype=float).reshape(-1)
    if kind in ("gaussian", "diag") and mean.size != dim:
        raise ConfigError(f"Family mean has length {mean.size}, target dimension is {dim}")
    try:
        if kind == "gaussian":
            if "scale" in spec:
                return GaussianParams(mean=mean, scale=spec["scale"])
            if "cov" in spec:
                return GaussianParams(mean=mean, scale=cholesky(np.asarray(spec["cov"], dtype=float), lower=True))
            return GaussianParams.standard(mean)
        if kind == "diag":
            return DiagGaussianParams(mean=mean, log_std=spec.get("log_std", np.zeros(dim)))
        if kind == "mixture":
            return init_mixture(int(spec.get("components", 1)), dim, seed,
                                mean_std=float(spec.get("mean_std", 2.0)),
                                diagonal=bool(spec.get("diagonal", False)),
                                scale=float(spec.get("component_scale", 1.0)),
                                means=spec.get("means"))
    except (ValueError, LinAlgError, NumericalError) as e:
        logger.error(f"Invalid initialization for family '{kind}': {e}")
        raise ConfigError(f"Invalid initialization for family '{kind}': {e}")
    raise ConfigError(f"Unknown family '{kind}'")
