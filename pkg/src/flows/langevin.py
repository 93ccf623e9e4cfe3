# src/flows/langevin.py
"""
Unadjusted Langevin dynamics (Euler-Maruyama): x <- x + dt * score_p(x) + sqrt(2 dt) * z.
"""

import logging
from typing import Any, List

import numpy as np

from src.families.noise import NoiseBatch, noise_array
from src.flows.state import ParticleCloud
from src.targets.base import TargetDensity
from src.utils.errors import DomainError, NumericalError

logger = logging.getLogger(__name__)


def langevin_step(cloud: ParticleCloud, target: TargetDensity, dt: float, noise: Any) -> ParticleCloud:
    """
    One Euler-Maruyama step; deterministic given the noise.

    Raises:
        DomainError: dt <= 0 or noise shape mismatch.
        NumericalError: Non-finite score at a particle.
    """
    if dt <= 0:
        raise DomainError(f"Langevin step size must be positive, got {dt}")
    z = noise_array(noise)
    if z.shape != cloud.positions.shape:
        raise DomainError(f"Noise shape {z.shape} does not match particles {cloud.positions.shape}")
    score = np.atleast_2d(target.score(cloud.positions))
    if not np.isfinite(score).all():
        bad = int(np.flatnonzero(~np.isfinite(score).all(axis=1))[0])
        logger.error(f"Non-finite target score at particle {bad}, step {cloud.step}")
        raise NumericalError(f"Non-finite target score at particle {bad}", step=cloud.step)
    positions = cloud.positions + dt * score + np.sqrt(2.0 * dt) * z
    return ParticleCloud(positions=positions, time=cloud.time + dt, seed=cloud.seed, step=cloud.step + 1)


def run_langevin(
    cloud: ParticleCloud,
    target: TargetDensity,
    dt: float,
    steps: int,
    seed: int,
    record_every: int = 1,
) -> List[ParticleCloud]:
    """
    Simulate steps Langevin updates; step k draws noise stream k + 1 of seed.

    Stream 0 is left for drawing the initial cloud.

    Returns:
        Clouds at steps 0, record_every, 2 * record_every, ... and the final step.
    """
    if record_every < 1:
        raise DomainError(f"record_every must be >= 1, got {record_every}")
    logger.info(f"Langevin: {cloud.n_particles} particles, {steps} steps, dt={dt}")
    clouds = [cloud]
    current = cloud
    for k in range(steps):
        noise = NoiseBatch.draw(seed, k + 1, current.n_particles, current.dim)
        current = langevin_step(current, target, dt, noise)
        if current.step % record_every == 0 or k == steps - 1:
            clouds.append(current)
    return clouds
