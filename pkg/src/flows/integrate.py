# src/flows/integrate.py
"""
Forward-Euler integration of the Bures-Wasserstein ODE forms.
"""

import logging
from typing import Callable, List, Optional, Union

import numpy as np

from src.families.noise import NoiseBatch
from src.flows.bw_ode import RHS_FORMS, Rhs, covariance_rhs_variant
from src.flows.state import FlowState
from src.targets.base import TargetDensity
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)

RhsFn = Callable[..., Rhs]


def forward_euler(
    state: FlowState,
    rhs: Union[str, RhsFn],
    target: TargetDensity,
    tau: float,
    steps: int,
    n_samples: Optional[int] = None,
    seed: int = 0,
    noise_fn: Optional[Callable[[int], NoiseBatch]] = None,
) -> List[FlowState]:
    """
    Integrate state_{k+1} = state_k + tau * rhs(state_k).

    Args:
        state: Initial state; its variant must match the RHS form.
        rhs: "hessian_free", "hessian", "sarkka", "scale" or a callable (state, target, z).
        target: Target density.
        tau: Step size > 0.
        steps: Number of steps.
        n_samples: Monte Carlo samples per step; None uses closed-form expectations.
        seed: Root seed; step k draws stream k.
        noise_fn: Optional override mapping a step index to its noise batch.

    Returns:
        The steps + 1 states, initial state first.

    Raises:
        NumericalError: Non-finite RHS or loss of positive-definiteness, with the step index.
    """
    if tau <= 0:
        raise DomainError(f"Step size must be positive, got {tau}")
    if steps < 0:
        raise DomainError(f"Number of steps must be non-negative, got {steps}")
    if isinstance(rhs, str):
        if covariance_rhs_variant(rhs) != state.variant:
            raise DomainError(f"RHS form '{rhs}' integrates {covariance_rhs_variant(rhs)} states, "
                              f"got a {state.variant} state")
        rhs_fn = RHS_FORMS[rhs]
    else:
        rhs_fn = rhs

    logger.info(f"Forward Euler: {steps} steps, tau={tau}, "
                f"{'closed-form' if n_samples is None and noise_fn is None else 'Monte Carlo'} expectations")
    trajectory = [state]
    current = state
    for step in range(steps):
        if noise_fn is not None:
            z = noise_fn(step)
        elif n_samples is not None:
            z = NoiseBatch.draw(seed, step, n_samples, state.dim)
        else:
            z = None
        d_mean, d_matrix = rhs_fn(current, target, z)
        if not (np.isfinite(d_mean).all() and np.isfinite(d_matrix).all()):
            logger.error(f"Non-finite ODE right-hand side at step {step}")
            raise NumericalError(f"Non-finite ODE right-hand side at step {step}", step=step,
                                 state=current.to_dict())
        try:
            current = current.advanced(d_mean, d_matrix, tau)
        except NumericalError as e:
            logger.error(f"Euler step {step} left the admissible set: {e}")
            raise NumericalError(f"Euler step {step} failed: {e}", step=step, state=current.to_dict())
        trajectory.append(current)
    return trajectory
