"""This module runs the invariant suite behind `renyi-spectrum verify`.

The fast level only touches the analytic solvers. The full level adds the
finite-N oracle, the Metropolis chain and Haar sampling, and takes minutes.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import numpy as np

from renyi_spectrum.coulomb_oracle import (
    OracleConfig,
    chain_mean_u,
    compare,
    metropolis_sample,
    minimize_potential,
)
from renyi_spectrum.critical import (
    U_C_ASYMPTOTE,
    U_E_ASYMPTOTE,
    critical_constants,
    typical_coefficients,
    typical_u,
    u_C,
    u_C_minimum,
    u_E,
)
from renyi_spectrum.errors import RenyiSpectrumError
from renyi_spectrum.haar_sampler import iter_spectra, ks_versus_marchenko_pastur, pool, u_estimate
from renyi_spectrum.phase_solver import (
    PhasePoint,
    evaporated_eigenvalue,
    entangled_coefficients,
    solve,
    solve_entangled,
    von_neumann_beta,
    von_neumann_u,
)
from renyi_spectrum.rich_progress import RichProgressReporter
from renyi_spectrum.special import g_kernel, h_kernel
from renyi_spectrum.spectrum import moment, u_of

logger = logging.getLogger(__name__)

LEVELS = ("fast", "full")

# a check returns (residual, tolerance); it passes when residual <= tolerance
Check = Callable[[int], Tuple[float, float]]


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    residual: float
    tolerance: float
    message: str = ""

    def to_dict(self) -> Dict[str, object]:
        return {
            "name": self.name,
            "passed": self.passed,
            "residual": self.residual,
            "tolerance": self.tolerance,
            "message": self.message,
        }


@dataclass(frozen=True)
class VerificationReport:
    level: str
    seed: int
    checks: Tuple[CheckResult, ...]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    @property
    def failures(self) -> List[str]:
        return [check.name for check in self.checks if not check.passed]

    def to_dict(self) -> Dict[str, object]:
        return {
            "level": self.level,
            "seed": self.seed,
            "passed": self.passed,
            "failures": self.failures,
            "checks": [check.to_dict() for check in self.checks],
        }


def _worst(pairs: Iterable[Tuple[float, float]]) -> Tuple[float, float]:
    """Collapse several (value, expected) pairs into the largest deviation"""
    return max(abs(value - expected) for value, expected in pairs), 0.0


def check_critical_exactness(seed: int) -> Tuple[float, float]:
    residual, _ = _worst(
        [
            (u_C(1.0), 2.0 / 3.0 + math.log(2.0 / 3.0)),
            (u_C(2.0), math.log(1.25)),
            (u_E(1.0), 0.5),
            (u_E(2.0), math.log(2.0)),
        ]
    )
    return residual, 1e-12


def check_critical_q10(seed: int) -> Tuple[float, float]:
    residual, _ = _worst([(u_C(10.0), 0.2275), (u_E(10.0), 1.0810)])
    return residual, 5e-3


def check_u_c_minimum(seed: int) -> Tuple[float, float]:
    q_star, u_star = u_C_minimum()
    # the q tolerance is ten times the u tolerance, so compare in u units
    return max(abs(q_star - 3.733) / 10.0, abs(u_star - 0.214)), 5e-3


def check_asymptotes(seed: int) -> Tuple[float, float]:
    residual, _ = _worst([(u_C(1e4), U_C_ASYMPTOTE), (u_E(1e4), U_E_ASYMPTOTE)])
    return residual, 1e-3


def check_von_neumann_critical_beta(seed: int) -> Tuple[float, float]:
    beta = von_neumann_beta(u_C(1.0))
    return abs(beta - 1.5) + abs(von_neumann_u(3.0) - (math.log(5.0 / 6.0) + 1.0 / 3.0)), 1e-8


def check_kernel_values(seed: int) -> Tuple[float, float]:
    return _worst(
        [
            (h_kernel(0.0, 2.0, 2.0), 0.5),
            (h_kernel(1.0, 1.5, 2.0), -1.0),
            (h_kernel(0.0, 1.0, 3.0), 0.5),
            (g_kernel(2.0, 2.0), 0.5),
            (g_kernel(1.0, 1.0), 0.25 - 0.5 * math.log(2.0)),
        ]
    )[0], 1e-9


def check_q2_closed_form(seed: int) -> Tuple[float, float]:
    pairs = []
    for u in (0.05, 0.1, 0.2):
        general = solve_entangled(PhasePoint(q=2.0, u=u), closed_form=False)
        exact = solve_entangled(PhasePoint(q=2.0, u=u))
        pairs += [
            (general.support.alpha, exact.support.alpha),
            (general.support.delta, exact.support.delta),
            (general.A, exact.A),
            (general.B, exact.B),
        ]
    return _worst(pairs)[0], 1e-8


CONTINUITY_ORDERS = (0.8, 1.0, 2.0, 5.0, 10.0)
CONTINUITY_OFFSET = 1e-7


def continuity_gap(q: float, offset: float) -> float:
    """Largest relative gap between the entangled solution at alpha = 1 + offset
    and the critical and typical values at u_C.
    """
    a_ent, b_ent, d_ent = entangled_coefficients(1.0 + offset, q)
    d_crit, a_crit, b_crit = critical_constants(q)
    a_typ, b_typ = typical_coefficients(d_crit, q)
    pairs = [
        (a_ent, a_crit),
        (b_ent, b_crit),
        (d_ent, d_crit),
        (a_typ, a_crit),
        (b_typ, b_crit),
        (typical_u(d_ent, q), u_C(q)),
    ]
    return max(abs(value - expected) / max(1.0, abs(expected)) for value, expected in pairs)


def continuity_tolerance(q: float, offset: float) -> float:
    # the entangled branch reaches u_C like (alpha - 1)^(q - 1/2), linearly once q > 3/2
    return 10.0 * max(1.0, q) * offset ** min(q - 0.5, 1.0)


def check_continuity_at_u_c(seed: int) -> Tuple[float, float]:
    worst = max(
        continuity_gap(q, CONTINUITY_OFFSET) / continuity_tolerance(q, CONTINUITY_OFFSET)
        for q in CONTINUITY_ORDERS
    )
    return worst, 1.0


def _self_consistency(q_values: Iterable[float], fractions: Iterable[float]) -> float:
    """Largest mass, mean or u round-trip error over a (q, u) grid.

    u runs through each phase as a fraction of ln N with N = 100.
    """
    size = 100
    worst = 0.0
    fractions = list(fractions)
    for q in q_values:
        for fraction in fractions:
            point = PhasePoint(q=q, u=fraction * math.log(size), N=size)
            solution = solve(point)
            worst = max(
                worst,
                abs(moment(solution, 0.0) - 1.0),
                abs(moment(solution, 1.0) - 1.0),
                abs(u_of(solution, q) - point.u),
            )
    return worst


def check_self_consistency_small(seed: int) -> Tuple[float, float]:
    return _self_consistency((1.0, 2.0, 3.5), (0.02, 0.1, 0.3)), 1e-6


def check_self_consistency_grid(seed: int) -> Tuple[float, float]:
    q_values = np.linspace(0.75, 10.0, 20)
    fractions = np.linspace(0.01, 0.6, 20)
    return _self_consistency(q_values, fractions), 1e-6


def check_oracle_wasserstein(seed: int) -> Tuple[float, float]:
    cfg = OracleConfig(N=64, q=2.0, u=0.1, seed=seed)
    state = minimize_potential(cfg)
    solution = solve(PhasePoint(q=2.0, u=0.1, N=64))
    return compare(state, solution).wasserstein1, 0.05


def check_metropolis_von_neumann(seed: int) -> Tuple[float, float]:
    expected = von_neumann_u(3.0)
    states = metropolis_sample(OracleConfig(N=64, q=1.0, beta=3.0, seed=seed), sweeps=64 * 40)
    return abs(chain_mean_u(states) - expected) / expected, 0.05


def check_metropolis_typical(seed: int) -> Tuple[float, float]:
    expected = math.log(2.0)
    states = metropolis_sample(OracleConfig(N=64, q=2.0, beta=0.0, seed=seed), sweeps=64 * 40)
    return abs(chain_mean_u(states) - expected) / expected, 0.05


def check_haar_marchenko_pastur(seed: int) -> Tuple[float, float]:
    spectra = list(iter_spectra(256, 100, seed))
    ks = ks_versus_marchenko_pastur(pool(spectra))
    worst = ks / 0.05
    for q, tolerance in ((1.0, 0.02), (2.0, 0.02), (5.0, 0.05)):
        estimates = [u_estimate(s, q) for s in spectra]
        worst = max(
            worst,
            abs(float(np.mean(estimates)) - u_E(q)) / tolerance,
            float(np.std(estimates, ddof=1)) / 0.05,
        )
    # every term is a residual in units of its own tolerance
    return worst, 1.0


def check_evaporation(seed: int) -> Tuple[float, float]:
    """The top eigenvalue tracks the evaporation root and leaves the sea as u grows.

    The root drops the sea's O(1) share of the purity, so at N = 64 it is only
    approached from above u = 1.2; the check is in units of each tolerance.
    """
    tops, gaps = {}, []
    for u in (0.9, 1.2, 1.5):
        scaled = minimize_potential(OracleConfig(N=64, q=2.0, u=u, seed=seed)).scaled
        tops[u] = (scaled[-1] / 64, evaporated_eigenvalue(64, 2.0, u))
        gaps.append(scaled[-1] - scaled[-2])
    worst = max(abs(top - mu) / 0.05 for top, mu in (tops[1.2], tops[1.5]))
    top, mu = tops[1.5]
    worst = max(worst, abs(top - mu) / mu / 0.1)
    if not gaps[0] < gaps[1] < gaps[2]:
        worst = math.inf
    return worst, 1.0


FAST_CHECKS: List[Tuple[str, Check]] = [
    ("critical_lines_exact", check_critical_exactness),
    ("critical_lines_q10", check_critical_q10),
    ("u_C_minimum", check_u_c_minimum),
    ("critical_asymptotes", check_asymptotes),
    ("beta_at_u_C_q1", check_von_neumann_critical_beta),
    ("kernel_values", check_kernel_values),
    ("q2_closed_form_regression", check_q2_closed_form),
    ("continuity_at_u_C", check_continuity_at_u_c),
    ("self_consistency", check_self_consistency_small),
]

FULL_CHECKS: List[Tuple[str, Check]] = FAST_CHECKS + [
    ("self_consistency_grid", check_self_consistency_grid),
    ("oracle_wasserstein_N64", check_oracle_wasserstein),
    ("metropolis_q1_beta3", check_metropolis_von_neumann),
    ("metropolis_q2_beta0", check_metropolis_typical),
    ("haar_marchenko_pastur_N256", check_haar_marchenko_pastur),
    ("separable_evaporation_N64", check_evaporation),
]


def run_check(name: str, check: Check, seed: int) -> CheckResult:
    """Run one check; package errors become failures instead of aborting the suite"""
    try:
        residual, tolerance = check(seed)
    except RenyiSpectrumError as exc:
        logger.warning("check %s raised %s: %s", name, type(exc).__name__, exc.message)
        return CheckResult(name, False, math.inf, math.nan, f"{type(exc).__name__}: {exc.message}")
    passed = bool(residual <= tolerance)
    if not passed:
        logger.warning("check %s failed: %.3e > %.3e", name, residual, tolerance)
    return CheckResult(name, passed, float(residual), float(tolerance))


def run_checks(
    level: str, seed: int, reporter: Optional[RichProgressReporter] = None
) -> VerificationReport:
    """Run the fast or full suite"""
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    checks = FAST_CHECKS if level == "fast" else FULL_CHECKS
    reporter = reporter or RichProgressReporter(enabled=False)
    results = []
    with reporter:
        reporter.add_task("checks", f"Running [bright_magenta]'{level}'[/] checks", len(checks))
        for name, check in checks:
            result = run_check(name, check, seed)
            mark = "[bold green]✓[/]" if result.passed else "[bold red]✘[/]"
            reporter.advance("checks", activity=f"{mark} {name}")
            results.append(result)
        reporter.complete("checks")
    return VerificationReport(level=level, seed=seed, checks=tuple(results))
