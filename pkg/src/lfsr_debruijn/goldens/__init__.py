"""Worked-example fixtures for n = 6 and a loader for them."""
from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

KNOWN = ("table1", "table2", "table3")
EXPECTED_ROWS = {"table1": 32, "table2": 4, "table3": 5}


class GoldenLoadError(RuntimeError):
    pass


@dataclass(frozen=True)
class GoldenTable:
    id: str
    n: int
    rows: list


def load_golden(table_id: str) -> GoldenTable:
    """Load one fixture.

    table1 rows: ``{cycle, index, tail, l, path_states, label}``; rows whose
    printed path label was a duplicate carry ``printed_label`` and
    ``corrected: true``. table2 rows: ``{class, C1, C2}`` with ``[cycle,
    index]`` references into table1. table3 rows: ``[state, conjugate]``.
    """
    if table_id not in KNOWN:
        raise GoldenLoadError(f"unknown golden table {table_id!r}")
    try:
        text = resources.files(__name__).joinpath(f"{table_id}.json").read_text()
        data = json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise GoldenLoadError(f"cannot read {table_id}: {exc}") from exc
    if data.get("schema") != 1 or data.get("id") != table_id:
        raise GoldenLoadError(f"{table_id}: unexpected schema or id")
    rows = data.get("rows")
    if not isinstance(rows, list) or len(rows) != EXPECTED_ROWS[table_id]:
        raise GoldenLoadError(f"{table_id}: expected {EXPECTED_ROWS[table_id]} rows")
    return GoldenTable(id=table_id, n=int(data["n"]), rows=rows)
