"""Query result values: an ordered entity list, a scalar, or a table."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass
class Result:
    kind: str  # entities | scalar | table
    entity_kind: str | None = None
    entities: list[str] | None = None
    value: int | None = None
    columns: tuple[str, ...] | None = None
    rows: list[tuple] | None = None

    def total(self) -> int:
        if self.kind == "entities":
            return len(self.entities or [])
        if self.kind == "table":
            return len(self.rows or [])
        return 1

    def to_dict(self) -> dict:
        if self.kind == "entities":
            return {
                "kind": "entities",
                "entity_kind": self.entity_kind,
                "total": len(self.entities or []),
                "items": list(self.entities or []),
            }
        if self.kind == "scalar":
            return {"kind": "scalar", "value": self.value}
        return {
            "kind": "table",
            "columns": list(self.columns or ()),
            "total": len(self.rows or []),
            "rows": [list(r) for r in self.rows or []],
        }


def entities_result(kind: str, keys: list[str]) -> Result:
    return Result(kind="entities", entity_kind=kind, entities=keys)


def scalar_result(value: int) -> Result:
    return Result(kind="scalar", value=value)


def table_result(columns: tuple[str, ...], rows: list[tuple]) -> Result:
    return Result(kind="table", columns=columns, rows=rows)
