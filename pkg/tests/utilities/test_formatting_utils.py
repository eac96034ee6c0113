import pytest
from rich.console import Console
from rich.table import Table

from renyi_spectrum.utilities.formatting_utils import (
    describe_mapping,
    format_cell,
    prepare_rich_table,
    print_table_panel,
)


@pytest.mark.parametrize(
    "given_value,expected_text",
    [
        (True, "[bold green]✓[/]"),
        (False, "[bold red]✘[/]"),
        (0.1234567891, "0.123457"),
        ("Typical", "[green][b]Typical[/b][/green]"),
        ("Separable", "[blue][b]Separable[/b][/blue]"),
        ("EIES", "EIES"),
        (None, "[bright_black]n/a[/]"),
        (12, "12"),
    ],
)
def test_format_cell(given_value, expected_text):
    assert format_cell(given_value) == expected_text


def test_prepare_rich_table():
    records = [{"q": 2.0, "phase": "Entangled"}, {"q": 3.0, "phase": "Typical"}]
    table = prepare_rich_table(records)
    assert isinstance(table, Table)
    assert [column.header for column in table.columns] == ["q", "phase"]
    assert table.row_count == 2


def test_prepare_rich_table_column_subset():
    table = prepare_rich_table([{"q": 2.0, "u": 0.1, "phase": "Entangled"}], ["phase", "q"])
    assert [column.header for column in table.columns] == ["phase", "q"]


def test_prepare_rich_table_empty():
    assert prepare_rich_table([]).row_count == 0


def test_describe_mapping():
    assert describe_mapping({"a": 1, "b": None}) == [
        {"key": "a", "value": 1},
        {"key": "b", "value": None},
    ]


def test_print_table_panel():
    console = Console(record=True, width=80)
    print_table_panel([{"q": 2.0, "phase": "Typical"}], "Phase diagram", console=console)
    text = console.export_text()
    assert "Phase diagram" in text
    assert "Typical" in text
    assert "n/a" not in text
