"""This module serialises results into the CSV, JSON and YAML files of the CLI.

Numbers are written with 17 significant digits and no locale dependence, so
the same inputs always produce byte-identical files.
"""
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
import yaml

from renyi_spectrum import __version__
from renyi_spectrum.constants import (
    CSV_FLOAT_FORMAT,
    RENYI_SPECTRUM_TIMESTAMP_ENV_VAR_KEY,
)
from renyi_spectrum.phase_solver import SpectrumSolution
from renyi_spectrum.spectrum import DensityGrid


def format_number(value: Any) -> str:
    """CSV cell for a number; integers stay integers, non-finite floats spell out"""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        number = float(value)
        if math.isnan(number):
            return "nan"
        if math.isinf(number):
            return "inf" if number > 0 else "-inf"
        return format(number, CSV_FLOAT_FORMAT)
    if value is None:
        return ""
    return str(value)


def to_plain(value: Any) -> Any:
    """Recursively convert numpy values to builtins; non-finite floats become None"""
    if isinstance(value, dict):
        return {str(key): to_plain(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [to_plain(item) for item in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        number = float(value)
        return number if math.isfinite(number) else None
    if hasattr(value, "value"):  # enums
        return value.value
    return value


def render_csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_number(cell) for cell in row) for row in rows)
    return "\n".join(lines) + "\n"


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(to_plain(payload), indent=2) + "\n"


def render_yaml(payload: Dict[str, Any]) -> str:
    return yaml.safe_dump(to_plain(payload), sort_keys=False)


def write_text(path: Path, text: str) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as handle:
        handle.write(text)
    return path


@dataclass(frozen=True)
class RunManifest:
    """Provenance record embedded in every JSON output"""

    command: str
    parameters: Dict[str, Any] = field(default_factory=dict)
    tool_version: str = __version__
    seed: Optional[int] = None
    timestamp: str = ""

    @classmethod
    def create(
        cls, command: str, parameters: Dict[str, Any], seed: Optional[int] = None
    ) -> "RunManifest":
        """
        This method stamps a manifest with the current UTC time, or with
        `SOURCE_DATE_EPOCH` when it is set so repeated runs are identical.
        """
        epoch = os.environ.get(RENYI_SPECTRUM_TIMESTAMP_ENV_VAR_KEY)
        moment = (
            datetime.fromtimestamp(int(epoch), tz=timezone.utc)
            if epoch
            else datetime.now(tz=timezone.utc)
        )
        return cls(
            command=command,
            parameters=dict(parameters),
            seed=seed,
            timestamp=moment.isoformat(timespec="seconds"),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "parameters": self.parameters,
            "tool_version": self.tool_version,
            "seed": self.seed,
            "timestamp": self.timestamp,
        }


def solution_metadata(solution: SpectrumSolution) -> Dict[str, Any]:
    """Phase, support and multipliers of a solution; `mu` only when evaporated"""
    support = solution.support
    metadata = {
        "phase": solution.phase.value,
        "a": support.a,
        "b": support.b,
        "alpha": support.alpha,
        "delta": support.delta,
        "A": solution.A,
        "B": solution.B,
        "beta": solution.beta,
        "xi": solution.xi,
    }
    if solution.mu is not None:
        metadata["mu"] = solution.mu
    if solution.boundary:
        metadata["boundary"] = True
    return metadata


def grid_rows(grid: DensityGrid) -> List[List[float]]:
    return [[lam, density] for lam, density in zip(grid.lambdas, grid.densities)]


def grid_metadata(grid: DensityGrid) -> Dict[str, Any]:
    return {
        "points": len(grid.lambdas),
        "mass": grid.mass(),
        "divergent_left": grid.divergent_left,
        "divergent_right": grid.divergent_right,
    }
