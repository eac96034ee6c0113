"""This module provides a progress display for long numerical runs"""
import os
import sys
from datetime import timedelta
from typing import Dict, Optional

from rich.progress import (
    BarColumn,
    Progress,
    ProgressColumn,
    SpinnerColumn,
    Task,
    TaskID,
)
from rich.text import Text

from renyi_spectrum.constants import RENYI_SPECTRUM_PROGRESS_ENV_VAR_KEY
from renyi_spectrum.rich_init import STDERR_CONSOLE


class RichProgressReporter:
    """Tracks named tasks (checks, samples, sweeps) on a rich progress display.

    When disabled every method is a no-op, so callers never branch on it.
    """

    def __init__(self, enabled: Optional[bool] = None):
        """This constructor initialises the variables used to manage state"""
        self.enabled = (
            self._check_if_progress_bar_enabled() if enabled is None else enabled
        )
        self.progress = None
        self.tasks: Dict[str, TaskID] = {}

    def __enter__(self) -> "RichProgressReporter":
        if self.enabled:
            progress_desc_format = "[progress.description]{task.description}"
            progress_percentage_format = "[progress.percentage]{task.percentage:>3.0f}%"
            progress_activity_format = "{task.fields[activity]}"
            self.progress = Progress(
                _ElapsedColumn(),
                progress_desc_format,
                SpinnerColumn(),
                BarColumn(),
                progress_percentage_format,
                progress_activity_format,
                console=STDERR_CONSOLE,
                transient=True,
            )
            self.progress.start()
        return self

    def __exit__(self, *exc_info):
        if self.progress:
            self.progress.stop()
        self.progress = None
        self.tasks = {}

    def add_task(self, key: str, desc: str, count: int):
        """This method adds a task to the progress bar"""
        if self.progress:
            self.tasks[key] = self.progress.add_task(desc, total=count, activity="")

    def advance(self, key: str, activity: str = ""):
        """Increment a task and show what just finished"""
        if self.progress and key in self.tasks:
            self.progress.update(self.tasks[key], advance=1, activity=activity)

    def complete(self, key: str, activity: str = "[bold green]✓ done[/]"):
        if self.progress and key in self.tasks:
            task = self.tasks[key]
            total = next(t.total for t in self.progress.tasks if t.id == task)
            self.progress.update(task, completed=total, activity=activity)

    @staticmethod
    def _check_if_progress_bar_enabled() -> bool:
        """Convert env variable into boolean; off when stderr is not a terminal"""
        flag = os.environ.get(RENYI_SPECTRUM_PROGRESS_ENV_VAR_KEY)
        if flag is not None:
            return bool(int(flag))
        return sys.stderr.isatty()


class _ElapsedColumn(ProgressColumn):
    """Renders time elapsed for top task only"""

    def render(self, task: Task) -> Text:
        """Show time elapsed."""
        if task.id == 0:
            elapsed = task.finished_time if task.finished else task.elapsed
            if elapsed is None:
                return Text("-:--:--", style="cyan")
            delta = timedelta(seconds=int(elapsed))
            return Text(str(delta), style="green")
        return Text("")
