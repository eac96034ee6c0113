"""This module provides utilities that are helpful
for printing to the rich console"""

from typing import Any, Dict, List, Optional, Sequence

from rich import box
from rich.console import Console
from rich.panel import Panel
from rich.style import Style
from rich.table import Table

from renyi_spectrum.utilities.export_utils import format_number

PHASE_COLOURS = {
    "Entangled": "red",
    "Typical": "green",
    "Separable": "blue",
}


def format_cell(value: Any) -> str:
    """Short, markup-aware rendering of one table cell"""
    if isinstance(value, bool):
        return "[bold green]✓[/]" if value else "[bold red]✘[/]"
    if isinstance(value, float):
        return format(value, ".6g")
    if isinstance(value, str) and value in PHASE_COLOURS:
        colour = PHASE_COLOURS[value]
        return f"[{colour}][b]{value}[/b][/{colour}]"
    if value is None:
        return "[bright_black]n/a[/]"
    return format_number(value)


def prepare_rich_table(
    records: List[Dict[str, Any]], columns: Optional[Sequence[str]] = None
) -> Table:
    """This method will build a rich.Table object based on a list of records

    Args:
        records (List[Dict[str, Any]]): One mapping per row
        columns (Optional[Sequence[str]]): Column order; defaults to the keys
            of the first record

    Returns:
        Table: The table to render
    """
    table = Table(show_header=True, header_style=Style(color="white"), box=box.ROUNDED)
    columns = list(columns or (records[0].keys() if records else []))
    for column in columns:
        table.add_column(column, justify="center")
    for row in records:
        table.add_row(*(format_cell(row.get(column)) for column in columns))
    return table


def print_table_panel(
    records: List[Dict[str, Any]],
    title: str,
    columns: Optional[Sequence[str]] = None,
    console: Optional[Console] = None,
):
    """This method prints a titled table, the way every `--format table` output looks"""
    table = prepare_rich_table(records, columns)
    (console or Console()).print(
        "\n",
        Panel(table, expand=False, title=title, padding=(1, 1), box=box.MINIMAL),
    )


def describe_mapping(mapping: Dict[str, Any]) -> List[Dict[str, Any]]:
    """Turn a flat mapping into `key`/`value` records for a two-column table"""
    return [{"key": key, "value": value} for key, value in mapping.items()]
