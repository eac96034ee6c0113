"""Command line tools for large-N Renyi entanglement spectra.
Intended to be invoked via `renyi-spectrum`."""
import functools
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence

import click
import numpy as np
import rich_click

from renyi_spectrum import __version__
from renyi_spectrum.constants import (
    DEFAULT_GRID_POINTS,
    DEFAULT_SEED,
    EXIT_NUMERICAL,
    MIN_GRID_POINTS,
)
from renyi_spectrum.coulomb_oracle import (
    MetropolisCheckpoint,
    MetropolisSampler,
    OracleConfig,
    chain_mean_u,
    compare,
    minimize_potential,
)
from renyi_spectrum.critical import (
    U_C_ASYMPTOTE,
    U_E_ASYMPTOTE,
    region_tags,
    tabulate,
    u_C,
    u_C_minimum,
    u_E,
)
from renyi_spectrum.errors import DomainError, RenyiSpectrumError
from renyi_spectrum.haar_sampler import (
    iter_spectra,
    ks_versus_marchenko_pastur,
    pool,
    u_estimate,
)
from renyi_spectrum.phase_solver import PhasePoint, classify, solve
from renyi_spectrum.rich_init import start_up
from renyi_spectrum.rich_progress import RichProgressReporter
from renyi_spectrum.special import KernelConfig
from renyi_spectrum.spectrum import cdf, export_grid
from renyi_spectrum.utilities.config_utils import kernel_config, read_config_file
from renyi_spectrum.utilities.export_utils import (
    RunManifest,
    grid_metadata,
    grid_rows,
    render_csv,
    render_json,
    render_yaml,
    solution_metadata,
    write_text,
)
from renyi_spectrum.utilities.formatting_utils import describe_mapping, print_table_panel
from renyi_spectrum.verification import LEVELS, run_checks

logger = logging.getLogger(__name__)

CONTEXT_SETTINGS = {"help_option_names": ["-h", "--help"]}
FORMATS = ["csv", "json", "yaml", "table"]


@dataclass
class RunContext:
    """State shared by every subcommand, built once by the group"""

    kernel: KernelConfig
    oracle: Dict[str, Any] = field(default_factory=dict)


def handle_errors(func: Callable) -> Callable:
    """
    This method wraps a command callback so package errors become a JSON
    document on standard error and the matching exit code
    """

    @functools.wraps(func)
    def wrapped(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except RenyiSpectrumError as exc:
            logger.debug("command failed", exc_info=True)
            click.echo(json.dumps(exc.to_dict(), default=str), err=True)
            click.get_current_context().exit(exc.exit_code)

    return wrapped


@dataclass
class _Output:
    """Files of one command and the payloads used when printing to stdout"""

    stem: str
    csv: Dict[str, str]
    metadata: Dict[str, Any]
    table: List[Dict[str, Any]]
    title: str
    columns: Optional[Sequence[str]] = None


def _emit(output: _Output, fmt: str, out: Optional[str]):
    """Write every file into `out`, or print the chosen format to stdout"""
    if out:
        directory = Path(out)
        for name, text in output.csv.items():
            write_text(directory / name, text)
        write_text(directory / f"{output.stem}.json", render_json(output.metadata))
        logger.info("wrote [bright_blue]%s[/] outputs to %s", output.stem, directory)
        return
    if fmt == "csv":
        click.echo(next(iter(output.csv.values())), nl=False)
    elif fmt == "json":
        click.echo(render_json(output.metadata), nl=False)
    elif fmt == "yaml":
        click.echo(render_yaml(output.metadata), nl=False)
    else:
        print_table_panel(output.table, output.title, output.columns)


def _manifest(command: str, parameters: Dict[str, Any], seed: Optional[int] = None):
    return RunManifest.create(command, parameters, seed).to_dict()


format_option = click.option(
    "--format",
    "-f",
    "fmt",
    default="csv",
    type=click.Choice(FORMATS, case_sensitive=False),
    help="Print 'csv' (default) data, 'json' / 'yaml' metadata or a pretty"
    " 'table' to stdout; ignored when --out is given",
)
out_option = click.option(
    "--out",
    type=click.Path(file_okay=False),
    default=None,
    help="Directory receiving the CSV and JSON files",
)
seed_option = click.option(
    "--seed", type=click.IntRange(0, 2 ** 64 - 1), default=DEFAULT_SEED, show_default=True
)


@click.group(cls=rich_click.RichGroup, context_settings=CONTEXT_SETTINGS, name="renyi-spectrum")
@click.version_option(__version__)
@click.option("--log-level", default=None, help="Logging level for the rich handler")
@click.option(
    "--config",
    "config_path",
    type=click.Path(dir_okay=False),
    default=None,
    help="YAML file with 'kernel:' and 'oracle:' overrides",
)
@click.pass_context
@handle_errors
def commands(ctx: click.Context, log_level: Optional[str], config_path: Optional[str]):
    """Large-N entanglement spectra of random pure states at fixed Renyi entropy."""
    start_up(log_level)
    sections = read_config_file(config_path)
    ctx.obj = RunContext(kernel=kernel_config(sections["kernel"]), oracle=sections["oracle"])


@commands.command(cls=rich_click.RichCommand)
@click.option("--q", "q", type=float, required=True, help="Renyi order")
@click.option("--u", "u", type=float, required=True, help="Entropy deficit ln N - S_q")
@click.option("--N", "N", type=int, default=None, help="Dimension, needed when separable")
@click.option(
    "--grid-points",
    type=int,
    default=DEFAULT_GRID_POINTS,
    show_default=True,
    help=f"Chebyshev grid size, at least {MIN_GRID_POINTS}",
)
@out_option
@format_option
@click.pass_obj
@handle_errors
def spectrum(
    obj: RunContext,
    q: float,
    u: float,
    N: Optional[int],
    grid_points: int,
    out: Optional[str],
    fmt: str,
):
    """Density of N lambda on a Chebyshev grid, with the solution metadata."""
    point = PhasePoint(q=q, u=u, N=N)
    solution = solve(point, obj.kernel)
    grid = export_grid(solution, grid_points, obj.kernel)
    metadata = solution_metadata(solution)
    metadata["grid"] = grid_metadata(grid)
    metadata["regions"] = sorted(region_tags(point))
    metadata["manifest"] = _manifest(
        "spectrum", {"q": q, "u": u, "N": N, "grid_points": grid_points}
    )
    _emit(
        _Output(
            stem="spectrum",
            csv={
                "spectrum.csv": render_csv(["lambda", "density"], grid_rows(grid)),
                "spectrum_cdf.csv": render_csv(
                    ["lambda", "cdf"],
                    zip(grid.lambdas, cdf(solution, grid.lambdas, obj.kernel)),
                ),
            },
            metadata=metadata,
            table=describe_mapping(solution_metadata(solution)),
            title=f"[b]{solution.phase.value}[/] spectrum at q={q:g}, u={u:g}",
        ),
        fmt,
        out,
    )


@commands.command(cls=rich_click.RichCommand)
@click.option("--q-min", type=float, default=0.6, show_default=True)
@click.option("--q-max", type=float, default=20.0, show_default=True)
@click.option("--steps", type=int, default=200, show_default=True)
@out_option
@format_option
@handle_errors
def critical(q_min: float, q_max: float, steps: int, out: Optional[str], fmt: str):
    """Tabulate u_C, u_E and the critical Tricomi constants."""
    if not 0.5 < q_min < q_max or steps < 2:
        raise DomainError(
            "require 1/2 < q_min < q_max and steps >= 2",
            {"q_min": q_min, "q_max": q_max, "steps": steps},
        )
    columns = ["q", "u_C", "u_E", "delta_C", "A_C", "B_C"]
    rows = tabulate(np.linspace(q_min, q_max, steps))
    q_star, u_star = u_C_minimum()
    summary = {
        "u_C_min": {"q": q_star, "u": u_star},
        "asymptotes": {"u_C": U_C_ASYMPTOTE, "u_E": U_E_ASYMPTOTE},
        "manifest": _manifest("critical", {"q_min": q_min, "q_max": q_max, "steps": steps}),
    }
    records = [{name: getattr(row, name) for name in columns} for row in rows]
    _emit(
        _Output(
            stem="critical",
            csv={"critical.csv": render_csv(columns, [list(r.values()) for r in records])},
            metadata=summary,
            table=records,
            title=f"Critical lines on [cyan]{steps}[/] orders",
            columns=columns,
        ),
        fmt,
        out,
    )


@commands.command(cls=rich_click.RichCommand)
@click.option("--q-min", type=float, default=0.6, show_default=True)
@click.option("--q-max", type=float, default=10.0, show_default=True)
@click.option("--q-steps", type=int, default=20, show_default=True)
@click.option("--u-max", type=float, default=2.0, show_default=True)
@click.option("--u-steps", type=int, default=20, show_default=True)
@click.option("--N", "N", type=int, default=100, show_default=True)
@out_option
@format_option
@click.pass_obj
@handle_errors
def diagram(
    obj: RunContext,
    q_min: float,
    q_max: float,
    q_steps: int,
    u_max: float,
    u_steps: int,
    N: int,
    out: Optional[str],
    fmt: str,
):
    """Classify and solve every point of a (q, u) grid."""
    if q_steps < 1 or u_steps < 1 or not 0 < u_max <= math.log(N):
        raise DomainError(
            "require positive step counts and 0 < u_max <= ln N",
            {"q_steps": q_steps, "u_steps": u_steps, "u_max": u_max, "N": N},
        )
    columns = ["q", "u", "phase", "a", "b", "alpha", "delta", "A", "B", "beta", "xi", "mu"]
    records = []
    reporter = RichProgressReporter()
    with reporter:
        reporter.add_task("points", "Solving phase diagram", q_steps * u_steps)
        for q in np.linspace(q_min, q_max, q_steps):
            for u in np.linspace(u_max / u_steps, u_max, u_steps):
                solution = solve(PhasePoint(q=float(q), u=float(u), N=N), obj.kernel)
                records.append({"q": float(q), "u": float(u), **solution_metadata(solution)})
                reporter.advance("points", activity=f"q={q:.3g} u={u:.3g}")
    for record in records:
        record.pop("boundary", None)
        record.setdefault("mu", None)
    metadata = {
        "points": len(records),
        "manifest": _manifest(
            "diagram",
            {
                "q_min": q_min,
                "q_max": q_max,
                "q_steps": q_steps,
                "u_max": u_max,
                "u_steps": u_steps,
                "N": N,
            },
        ),
    }
    _emit(
        _Output(
            stem="diagram",
            csv={"diagram.csv": render_csv(columns, [[r[c] for c in columns] for r in records])},
            metadata=metadata,
            table=records,
            title="Phase diagram",
            columns=["q", "u", "phase", "a", "b", "mu"],
        ),
        fmt,
        out,
    )


@commands.command(cls=rich_click.RichCommand, name="classify")
@click.option("--q", "q", type=float, required=True)
@click.option("--u", "u", type=float, required=True)
@click.option("--N", "N", type=int, default=None)
@format_option
@handle_errors
def classify_point(q: float, u: float, N: Optional[int], fmt: str):
    """Phase and entropy-independent regions of one point."""
    point = PhasePoint(q=q, u=u, N=N)
    phase = classify(point)
    payload = {
        "q": q,
        "u": u,
        "N": N,
        "phase": phase.value,
        "regions": sorted(region_tags(point)),
        "u_C": u_C(q),
        "u_E": u_E(q),
    }
    csv_row = {k: v for k, v in payload.items() if k != "regions"}
    csv_row["regions"] = " ".join(payload["regions"])
    _emit(
        _Output(
            stem="classify",
            csv={"classify.csv": render_csv(list(csv_row), [list(csv_row.values())])},
            metadata=payload,
            table=describe_mapping(csv_row),
            title=f"Point ({q:g}, {u:g})",
        ),
        fmt,
        None,
    )


@commands.command(cls=rich_click.RichCommand)
@click.option(
    "--level", type=click.Choice(list(LEVELS)), default="fast", show_default=True
)
@seed_option
@out_option
@click.option(
    "--format",
    "-f",
    "fmt",
    default="json",
    type=click.Choice(["json", "yaml", "table"], case_sensitive=False),
)
@handle_errors
def verify(level: str, seed: int, out: Optional[str], fmt: str):
    """Run the fast (analytic) or full (oracle and sampler) invariant suite."""
    report = run_checks(level, seed, RichProgressReporter())
    payload = report.to_dict()
    payload["manifest"] = _manifest("verify", {"level": level}, seed)
    if out:
        write_text(Path(out) / "verify.json", render_json(payload))
    elif fmt == "json":
        click.echo(render_json(payload), nl=False)
    elif fmt == "yaml":
        click.echo(render_yaml(payload), nl=False)
    else:
        print_table_panel(
            [c.to_dict() for c in report.checks],
            f"[b]{level}[/] checks",
            ["name", "passed", "residual", "tolerance"],
        )
    if not report.passed:
        raise _ChecksFailed(report.failures)


class _ChecksFailed(RenyiSpectrumError):
    """Raised after the report is written when any check failed"""

    exit_code = EXIT_NUMERICAL

    def __init__(self, failures: List[str]):
        super().__init__("verification checks failed", {"failures": failures})


@commands.command(cls=rich_click.RichCommand)
@click.option("--N", "N", type=int, required=True)
@click.option("--q", "q", type=float, required=True)
@click.option("--u", "u", type=float, default=None, help="Target entropy deficit (newton)")
@click.option("--beta", type=float, default=None, help="Inverse temperature (metropolis)")
@click.option(
    "--method", type=click.Choice(["newton", "metropolis"]), default="newton", show_default=True
)
@click.option("--sweeps", type=int, default=None, help="Production sweeps, default 40 N")
@seed_option
@click.option("--checkpoint", type=click.Path(dir_okay=False), default=None)
@click.option("--resume", type=click.Path(exists=True, dir_okay=False), default=None)
@out_option
@format_option
@click.pass_obj
@handle_errors
def oracle(
    obj: RunContext,
    N: int,
    q: float,
    u: Optional[float],
    beta: Optional[float],
    method: str,
    sweeps: Optional[int],
    seed: int,
    checkpoint: Optional[str],
    resume: Optional[str],
    out: Optional[str],
    fmt: str,
):
    """Finite-N Coulomb gas: saddle point (newton) or Gibbs sampling (metropolis)."""
    if method == "newton" and (u is None or beta is not None):
        raise click.UsageError("--method newton needs --u and no --beta")
    if method == "metropolis" and (beta is None or u is not None):
        raise click.UsageError("--method metropolis needs --beta and no --u")
    cfg = OracleConfig(N=N, q=q, u=u, beta=beta, seed=seed, **obj.oracle)
    metrics: Dict[str, Any] = {}

    if method == "newton":
        state = minimize_potential(cfg)
        target_u = u
        metrics.update(iterations=state.iterations, pinned=state.pinned)
    else:
        resumed = None
        if resume:
            resumed = MetropolisCheckpoint.from_dict(json.loads(Path(resume).read_text()))
        sampler = MetropolisSampler(cfg, checkpoint=resumed)
        total = sweeps or 40 * N
        reporter = RichProgressReporter()
        with reporter:
            reporter.add_task("sweeps", "Metropolis sweeps", total)
            states = sampler.run(total, on_sweep=lambda _: reporter.advance("sweeps"))
        if checkpoint:
            write_text(Path(checkpoint), render_json(sampler.checkpoint().to_dict()))
        state = states[-1]
        target_u = chain_mean_u(states)
        metrics.update(
            chain_mean_u=target_u,
            states=len(states),
            acceptance=state.acceptance,
            sweeps_done=sampler.sweeps_done,
        )

    metrics.update(beta=state.beta, xi=state.xi, energy=state.energy, residual=state.residual)
    if q > 0.5 and 0 < target_u <= math.log(N):
        solution = solve(PhasePoint(q=q, u=target_u, N=N), obj.kernel)
        comparison = compare(state, solution)
        metrics["comparison"] = {
            "phase": solution.phase.value,
            "wasserstein1": comparison.wasserstein1,
            "ks": comparison.ks,
            "u_gap": comparison.u_gap,
            "analytic_beta": solution.beta,
            "analytic_mu": solution.mu,
        }
    metrics["manifest"] = _manifest(
        "oracle", {"N": N, "q": q, "u": u, "beta": beta, "method": method, "sweeps": sweeps}, seed
    )
    rows = [[k, lam, N * lam] for k, lam in enumerate(state.eigenvalues)]
    _emit(
        _Output(
            stem="oracle",
            csv={"oracle_eigenvalues.csv": render_csv(["index", "lambda", "scaled"], rows)},
            metadata=metrics,
            table=describe_mapping(
                {k: v for k, v in metrics.items() if not isinstance(v, dict)}
            ),
            title=f"Coulomb gas, N={N}, q={q:g} ({method})",
        ),
        fmt,
        out,
    )


@commands.command(cls=rich_click.RichCommand)
@click.option("--N", "N", type=int, required=True)
@click.option("--samples", type=int, default=100, show_default=True)
@click.option(
    "--q", "q_list", type=float, multiple=True, default=(1.0, 2.0, 5.0), show_default=True
)
@seed_option
@out_option
@format_option
@handle_errors
def haar(
    N: int,
    samples: int,
    q_list: Sequence[float],
    seed: int,
    out: Optional[str],
    fmt: str,
):
    """Sample Haar-random reduced spectra and compare them with Marcenko-Pastur."""
    spectra = []
    reporter = RichProgressReporter()
    with reporter:
        reporter.add_task("samples", f"Sampling N={N} spectra", samples)
        for spectrum_ in iter_spectra(N, samples, seed):
            spectra.append(spectrum_)
            reporter.advance("samples")
    estimates = {q: [u_estimate(s, q) for s in spectra] for q in q_list}
    pooled = pool(spectra)
    summary = {
        "mean_u": {f"{q:g}": float(np.mean(v)) for q, v in estimates.items()},
        "std_u": {
            f"{q:g}": float(np.std(v, ddof=1)) if samples > 1 else 0.0
            for q, v in estimates.items()
        },
        "ks_vs_MP": ks_versus_marchenko_pastur(pooled),
        "manifest": _manifest("haar", {"N": N, "samples": samples, "q": list(q_list)}, seed),
    }
    eigen_rows = [
        [index, value] for index, s in enumerate(spectra) for value in s.scaled_eigenvalues
    ]
    u_rows = [[index, q, v[index]] for q, v in estimates.items() for index in range(samples)]
    _emit(
        _Output(
            stem="haar",
            csv={
                "haar_eigenvalues.csv": render_csv(["sample", "scaled"], eigen_rows),
                "haar_u.csv": render_csv(["sample", "q", "u"], u_rows),
            },
            metadata=summary,
            table=[
                {
                    "q": q,
                    "mean_u": summary["mean_u"][f"{q:g}"],
                    "std_u": summary["std_u"][f"{q:g}"],
                }
                for q in q_list
            ],
            title=f"Haar spectra, N={N}, KS vs MP {summary['ks_vs_MP']:.4f}",
        ),
        fmt,
        out,
    )
