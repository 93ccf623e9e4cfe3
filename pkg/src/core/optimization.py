# src/core/optimization.py
"""
Variational optimization loop: plain gradient descent theta <- theta - tau * grad with
fresh seeded noise every step, or forward-Euler/Langevin evolution for flow estimators.
"""

import logging
from typing import Any, Callable, Dict, Optional, Tuple

import numpy as np

from src.config.run_config import RunConfig, build_family, build_target
from src.divergences.estimate import estimate_divergence_mc, gaussian_kl
from src.divergences.f_divergence import FDivergence
from src.families.gaussian import GaussianParams
from src.families.mixture import MixtureParams
from src.families.noise import NoiseBatch
from src.flows.bw_ode import RHS_FORMS
from src.flows.f_flow import distill_step
from src.flows.langevin import langevin_step
from src.flows.state import COV, SCALE, FlowState, ParticleCloud
from src.geometry.bures import w2_gaussian
from src.geometry.empirical import EmpiricalFit, empirical_gaussian_fit
from src.gradients.closed_form import gaussian_closed_form_path_gradient
from src.gradients.gmm import gmm_surrogate_gradient
from src.gradients.grad_estimate import GradEstimate
from src.gradients.path import path_gradient
from src.gradients.reparam import reparam_gradient_f, reparam_gradient_kl
from src.targets.base import TargetDensity
from src.targets.gaussian import GaussianTarget
from src.core.trajectory import Trajectory
from src.utils.errors import NumericalError
from src.utils.utils import provenance

logger = logging.getLogger(__name__)

# Divergence-estimate noise lives far from the per-step training streams
EVAL_STREAM_OFFSET = 1 << 40

ODE_FORMS = {
    "ode_cov_hessian_free": "hessian_free",
    "ode_cov_hessian": "hessian",
    "ode_cov_sarkka": "sarkka",
    "ode_scale": "scale",
}

GradientFn = Callable[[Any, TargetDensity, FDivergence, Any, RunConfig], Tuple[GradEstimate, float]]


def step_noise(config: RunConfig, step: int, dim: int, n_components: int = 1) -> Any:
    """Noise for one step: stream = step, or step * K + k for mixture component k."""
    if n_components == 1:
        return NoiseBatch.draw(config.seed, step, config.mc_samples, dim)
    return [NoiseBatch.draw(config.seed, step * n_components + k, config.mc_samples, dim)
            for k in range(n_components)]


def _reparam_kl(params, target, div, z, config):
    return reparam_gradient_kl(params, target, z), config.learning_rate


def _reparam_f(params, target, div, z, config):
    return reparam_gradient_f(params, target, div, z, ratio_shift=config.ratio_shift), config.learning_rate


def _path(params, target, div, z, config):
    if isinstance(params, MixtureParams):
        return gmm_surrogate_gradient(params, target, div, z, ratio_shift=config.ratio_shift), config.learning_rate
    return path_gradient(params, target, div, z, ratio_shift=config.ratio_shift), config.learning_rate


def _closed_form(params, target, div, z, config):
    return gaussian_closed_form_path_gradient(params, target, z), config.learning_rate


def _distill(params, target, div, z, config):
    # the regression gradient already carries the factor tau
    grad, _ = distill_step(params, target, div, config.learning_rate, z, ratio_shift=config.ratio_shift)
    return grad, 1.0


GRADIENT_ESTIMATORS: Dict[str, GradientFn] = {
    "reparam_kl": _reparam_kl,
    "reparam_f": _reparam_f,
    "path": _path,
    "closed_form_gaussian": _closed_form,
    "distill": _distill,
}


def w2_to_target(state: Any, target: TargetDensity) -> Optional[float]:
    """W2 for Gaussian targets, else None."""
    if not isinstance(target, GaussianTarget):
        return None
    return w2_gaussian(state, target)


def divergence_estimate(config: RunConfig, params: Any, target: TargetDensity, div: FDivergence,
                        step: int) -> Optional[float]:
    """
    Divergence at the current parameters: closed-form KL for Gaussian pairs under reverse KL,
    else a Monte Carlo estimate when the target normalizer is known.
    """
    if isinstance(params, MixtureParams):
        return None
    if div.name == "reverse_kl" and isinstance(target, GaussianTarget) and hasattr(params, "covariance"):
        return gaussian_kl(params.mean, params.covariance, target.mean, target.covariance)
    if target.log_normalizer is None:
        return None
    z = NoiseBatch.draw(config.seed, EVAL_STREAM_OFFSET + step, max(config.mc_samples, 1000), params.dim)
    return estimate_divergence_mc(div, params, target, z)


def _header(config: RunConfig) -> Dict[str, Any]:
    return {"config": config.to_dict()}


def _record_due(config: RunConfig, step: int) -> bool:
    return step % config.w2_every == 0 or step == config.iterations


def optimize(config: RunConfig, target: Optional[TargetDensity] = None, params: Any = None) -> Tuple[Trajectory, Any]:
    """
    Run one optimization.

    Args:
        config: Run configuration.
        target: Prebuilt target (else built from config.target).
        params: Initial parameters (else built from config.family).

    Returns:
        (trajectory, final state): parameters for gradient estimators, a FlowState for
        ODE estimators, the final EmpiricalFit for Langevin.

    Raises:
        NumericalError: Estimator failure, with the step index and the last good state.
    """
    target = target if target is not None else build_target(config.target)
    params = params if params is not None else build_family(config.family, target.dim, config.seed)
    div = config.divergence_obj()
    trajectory = Trajectory(name=config.estimator, header=_header(config), provenance=provenance(config.to_dict()))
    logger.info(f"Starting {config.estimator} run: {config.iterations} steps on a {target.dim}D target")

    if config.estimator in ODE_FORMS:
        final = _run_ode(config, target, params, trajectory)
    elif config.estimator == "langevin":
        final = _run_langevin(config, target, params, trajectory)
    else:
        final = _run_gradient_descent(config, target, params, div, trajectory)
    logger.info(f"Finished {config.estimator} run: {len(trajectory)} rows recorded")
    return trajectory, final


def run_vi(config: RunConfig, target: Optional[TargetDensity] = None, params: Any = None) -> Trajectory:
    """Run one optimization and return its trajectory."""
    return optimize(config, target, params)[0]


def _run_gradient_descent(config: RunConfig, target: TargetDensity, params: Any, div: FDivergence,
                          trajectory: Trajectory) -> Any:
    estimator = GRADIENT_ESTIMATORS[config.estimator]
    n_components = params.n_components if isinstance(params, MixtureParams) else 1
    for step in range(config.iterations + 1):
        grad: Optional[GradEstimate] = None
        if step < config.iterations:
            z = step_noise(config, step, params.dim, n_components)
            try:
                grad, lr = estimator(params, target, div, z, config)
            except NumericalError as e:
                logger.error(f"{config.estimator} failed at step {step}: {e}")
                raise NumericalError(f"{config.estimator} failed at step {step}: {e}", step=step,
                                     state=params.to_dict())
            logger.debug(f"step {step}: |grad|={grad.norm():.6g}, shift={grad.shift:.6g}")
        if _record_due(config, step):
            every = config.divergence_eval_every
            trajectory.append(
                step, step * config.learning_rate, params,
                w2_to_target=w2_to_target(params, target) if not isinstance(params, MixtureParams) else None,
                div_estimate=divergence_estimate(config, params, target, div, step)
                if every and step % every == 0 else None,
                grad_norm=None if grad is None else grad.norm(),
                shift=None if grad is None else grad.shift,
                surrogate=None if grad is None else grad.surrogate,
            )
        if grad is not None:
            try:
                params = params.updated(grad, lr)
            except NumericalError as e:
                logger.error(f"Update at step {step} produced invalid parameters: {e}")
                raise NumericalError(f"Update at step {step} produced invalid parameters: {e}", step=step,
                                     state=params.to_dict())
    return params


def _run_ode(config: RunConfig, target: TargetDensity, params: GaussianParams, trajectory: Trajectory) -> FlowState:
    form = ODE_FORMS[config.estimator]
    rhs = RHS_FORMS[form]
    variant = SCALE if form == "scale" else COV
    state = FlowState.from_params(params, variant=variant)
    tau = config.learning_rate
    for step in range(config.iterations + 1):
        if _record_due(config, step):
            trajectory.append(step, step * tau, state, w2_to_target=w2_to_target(state, target))
        if step == config.iterations:
            break
        z = None if config.analytic else NoiseBatch.draw(config.seed, step, config.mc_samples, state.dim)
        try:
            d_mean, d_matrix = rhs(state, target, z)
            if not (np.isfinite(d_mean).all() and np.isfinite(d_matrix).all()):
                raise NumericalError("Non-finite ODE right-hand side")
            state = state.advanced(d_mean, d_matrix, tau)
        except NumericalError as e:
            logger.error(f"ODE step {step} failed: {e}")
            raise NumericalError(f"ODE step {step} failed: {e}", step=step, state=state.to_dict())
    return state


def _run_langevin(config: RunConfig, target: TargetDensity, params: GaussianParams,
                  trajectory: Trajectory) -> EmpiricalFit:
    """Simulate the cloud step by step; only the fitted Gaussians are kept."""
    init = params.sample(NoiseBatch.draw(config.seed, 0, config.particle_count, params.dim))
    cloud = ParticleCloud(positions=init, time=0.0, seed=config.seed, step=0)
    dt = config.learning_rate
    fit = empirical_gaussian_fit(cloud)
    trajectory.append(0, 0.0, fit, w2_to_target=w2_to_target(fit, target))
    for k in range(config.iterations):
        # same stream layout as run_langevin: step k uses stream k + 1
        noise = NoiseBatch.draw(config.seed, k + 1, cloud.n_particles, cloud.dim)
        cloud = langevin_step(cloud, target, dt, noise)
        if _record_due(config, cloud.step):
            fit = empirical_gaussian_fit(cloud)
            trajectory.append(cloud.step, cloud.step * dt, fit, w2_to_target=w2_to_target(fit, target))
    return empirical_gaussian_fit(cloud)
