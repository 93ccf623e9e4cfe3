# src/core/app.py
"""
Command-line entry point.
Run with: PYTHONPATH=. python -m src.core.app <subcommand> [flags]

Exit codes: 0 success, 1 usage/configuration/data error, 2 numerical failure.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.config.config import configure_logging
from src.config.run_config import (
    ILLUSTRATION_FAMILY,
    ILLUSTRATION_TARGET,
    ODE_FORM_NAMES,
    RunConfig,
    load_run_config,
)
from src.core.experiments import (
    BLR_DEFAULTS,
    run_blr,
    run_divergence_sweep,
    run_flow_comparison,
    run_geodesic,
    run_gmm_fit,
    run_self_checks,
)
from src.core.optimization import optimize
from src.families.serialization import dump_params
from src.flows.state import FlowState
from src.services.plot_data import emit_plot_data
from src.utils.errors import ConfigError, DataError, DomainError, NumericalError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2

# Preset values per subcommand; config files and flags override them
SUBCOMMAND_DEFAULTS: Dict[str, Dict[str, Any]] = {
    "fit": {},
    "flow-demo": {"target": ILLUSTRATION_TARGET, "family": ILLUSTRATION_FAMILY, "mc_samples": 100},
    "gmm-fit": {
        "target": {"name": "mixture_1d"},
        "family": {"type": "mixture", "components": 4},
        "divergence": "forward_kl",
        "iterations": 10000,
        "w2_every": 10,
    },
    "blr": dict(BLR_DEFAULTS, estimator="path"),
    "geodesic": {},
    "check": {},
    "sweep": {},
}


class ArgumentParser(argparse.ArgumentParser):
    """argparse with usage errors mapped to exit code 1."""

    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> ArgumentParser:
    parser = ArgumentParser(prog="src.core.app", description="Gradient-flow variational inference toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)
    helps = {
        "fit": "Run one optimization and write its trajectory",
        "flow-demo": "BBVI-rep, BBVI-path, ODE and Langevin trajectories on a Gaussian target",
        "gmm-fit": "Fit a Gaussian mixture and dump its density grid",
        "blr": "Bayesian logistic regression test accuracy on a UCI file",
        "geodesic": "Dump the Bures-Wasserstein geodesic between two covariances",
        "check": "Score finite differences and estimator identity self-tests",
        "sweep": "Path and reparameterization runs per f-divergence on the toy target",
    }
    for name, text in helps.items():
        cmd = sub.add_parser(name, help=text, description=text)
        cmd.add_argument("--config", type=Path, help="Flat JSON object with RunConfig fields")
        cmd.add_argument("--seed", type=int, help="Root seed")
        cmd.add_argument("--out", help="Output file (.csv or .json) or directory")
        cmd.add_argument("--estimator", help="Gradient estimator or flow")
        cmd.add_argument("--divergence", help="reverse_kl, forward_kl, chi2, hellinger or alpha:<value>")
        cmd.add_argument("--lr", type=float, help="Step size tau")
        cmd.add_argument("--samples", type=int, help="Monte Carlo samples per step")
        cmd.add_argument("--steps", type=int, help="Iterations")
        cmd.add_argument("--verbose", action="store_true", help="Debug logging")
        if name == "flow-demo":
            cmd.add_argument("--form", choices=ODE_FORM_NAMES, help="Bures-Wasserstein ODE form of the Euler run")
    return parser


def _overrides(args: argparse.Namespace) -> Dict[str, Any]:
    return {
        "seed": args.seed,
        "output": args.out,
        "estimator": args.estimator,
        "divergence": args.divergence,
        "learning_rate": args.lr,
        "mc_samples": args.samples,
        "iterations": args.steps,
        "ode_form": getattr(args, "form", None),
    }


def output_path(config: RunConfig, stem: str, suffix: str = "") -> Path:
    """
    Resolve where a result goes: config.output as a file when it has a .csv/.json
    suffix (suffix appended to its stem), else <output>/<stem><suffix>.csv.
    """
    out = Path(config.output)
    if out.suffix.lower() in (".csv", ".json"):
        return out.with_name(f"{out.stem}{suffix}{out.suffix}") if suffix else out
    return out / f"{stem}{suffix}.csv"


def run_command(command: str, config: RunConfig) -> List[Path]:
    """Execute one subcommand and return the written files."""
    written: List[Path] = []
    if command == "fit":
        trajectory, final = optimize(config)
        written.append(emit_plot_data(trajectory, output_path(config, config.estimator)))
        if hasattr(final, "to_dict") and not isinstance(final, FlowState):
            params_path = output_path(config, config.estimator, "_params").with_suffix(".json")
            dump_params(final, params_path)
            written.append(params_path)
    elif command == "flow-demo":
        for name, trajectory in run_flow_comparison(config).items():
            written.append(emit_plot_data(trajectory, output_path(config, "flow_demo", f"_{name}")))
    elif command == "gmm-fit":
        trajectory, grid, _ = run_gmm_fit(config)
        written.append(emit_plot_data(trajectory, output_path(config, "gmm_fit")))
        written.append(emit_plot_data(grid, output_path(config, "gmm_fit", "_grid"),
                                      extra_header={"cell": grid.attrs["cell"], "config": config.to_dict()}))
    elif command == "blr":
        written.append(emit_plot_data(run_blr(config), output_path(config, "blr")))
    elif command == "geodesic":
        written.append(emit_plot_data(run_geodesic(config), output_path(config, "geodesic"),
                                      extra_header={"config": config.to_dict()}))
    elif command == "check":
        checks = run_self_checks(config.seed)
        written.append(emit_plot_data(checks, output_path(config, "checks")))
        failed = checks.loc[~checks["passed"], "check"].tolist()
        if failed:
            logger.error(f"Self checks failed: {', '.join(failed)}")
            raise NumericalError(f"Self checks failed: {', '.join(failed)}")
    elif command == "sweep":
        _, combined = run_divergence_sweep(config)
        written.append(emit_plot_data(combined, output_path(config, "sweep"),
                                      extra_header={"config": config.to_dict()}))
    else:
        raise ConfigError(f"Unknown command '{command}'")
    return written


def main(argv: Optional[List[str]] = None) -> int:
    """Parse arguments, run the subcommand and map failures to exit codes."""
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        config = load_run_config(args.config, _overrides(args), SUBCOMMAND_DEFAULTS[args.command])
        for path in run_command(args.command, config):
            print(path)
    except NumericalError as e:
        step = "" if e.step is None else f" at step {e.step}"
        logger.error(f"Numerical failure{step}: {e}")
        if e.state is not None:
            logger.error(f"Last good state: {e.state}")
        return EXIT_NUMERICAL
    except (ConfigError, DataError, DomainError, OSError) as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
