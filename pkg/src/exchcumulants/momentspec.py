"""
MomentSpec input files and table output.

A MomentSpec is a JSON object::

    {
      "system": "tensor|mixture|free|boolean|cfree|graded|typeb",
      "variables": [{"name": "x", "degree": 1}, {"name": "1", "unit": true}],
      "moments": [{"word": ["x", "x"], "value": "1"}],
      "psi_moments": [...],          # cfree
      "beta_moments": [...],         # typeb
      "states": [{"p": "1/2", "moments": [...]}],   # mixture
      "symbolic": false
    }

Tables are written as JSON, CSV (header row first) or aligned text and can be
read back with :func:`read_table`.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Sequence

from .errors import DomainError
from .moments import Moments, MomentSource, SymbolicMoments
from .rings import format_value, from_json_value, parse_rational, to_json_value
from .systems import (
    BooleanSystem,
    CFreeSystem,
    ExchangeabilitySystem,
    FreeSystem,
    GradedSystem,
    MixtureSystem,
    TensorSystem,
    TypeBSystem,
    Variable,
)

SYSTEMS = ("tensor", "mixture", "free", "boolean", "cfree", "graded", "typeb")


@dataclass
class MomentSpec:
    system: str
    variables: list[Variable] = field(default_factory=list)
    moments: dict = field(default_factory=dict)
    psi_moments: dict = field(default_factory=dict)
    beta_moments: dict = field(default_factory=dict)
    states: list = field(default_factory=list)
    symbolic: bool = False

    @property
    def units(self) -> list[str]:
        return [v.name for v in self.variables if v.is_unit] or ["1"]

    @property
    def letters(self) -> list[str]:
        return [v.name for v in self.variables if not v.is_unit]

    @property
    def degrees(self) -> dict[str, int]:
        return {v.name: v.degree for v in self.variables if v.degree is not None}

    def source(self, table: dict, tag: str = "") -> MomentSource:
        if self.symbolic:
            return SymbolicMoments(tag)
        return Moments(table, tag=tag)

    def build(self) -> ExchangeabilitySystem:
        kw = {"units": self.units}
        kind = self.system
        if kind == "tensor":
            return TensorSystem(self.source(self.moments), **kw)
        if kind == "free":
            return FreeSystem(self.source(self.moments), **kw)
        if kind == "boolean":
            return BooleanSystem(self.source(self.moments), **kw)
        if kind == "graded":
            return GradedSystem(self.source(self.moments), self.degrees, **kw)
        if kind == "cfree":
            return CFreeSystem(self.source(self.moments), self.source(self.psi_moments, "psi"), **kw)
        if kind == "typeb":
            return TypeBSystem(self.source(self.moments), self.source(self.beta_moments, "beta"), **kw)
        if kind == "mixture":
            if not self.states:
                raise DomainError("a mixture spec needs 'states'")
            return MixtureSystem(
                [(p, self.source(m, f"s{i}")) for i, (p, m) in enumerate(self.states)], **kw
            )
        raise DomainError(f"unknown system {kind!r}; expected one of {', '.join(SYSTEMS)}")


def _moment_table(entries) -> dict:
    table = {}
    for e in entries or []:
        try:
            word = tuple(e["word"])
            value = parse_rational(e["value"])
        except (KeyError, TypeError) as exc:
            raise DomainError(f"bad moment entry {e!r}") from exc
        if not word:
            raise DomainError("the empty word always has moment 1 and cannot be bound")
        if word in table:
            raise DomainError(f"moment of {list(word)} bound twice")
        table[word] = value
    return table


def parse_spec(data: dict) -> MomentSpec:
    if not isinstance(data, dict) or "system" not in data:
        raise DomainError("a MomentSpec is a JSON object with a 'system' field")
    variables = []
    for v in data.get("variables", []):
        if isinstance(v, str):
            v = {"name": v}
        variables.append(Variable(v["name"], v.get("degree"), bool(v.get("unit", False))))
    names = [v.name for v in variables]
    if len(set(names)) != len(names):
        raise DomainError("variable names must be unique")
    states = [
        (parse_rational(s["p"]), _moment_table(s.get("moments")))
        for s in data.get("states", [])
    ]
    return MomentSpec(
        system=data["system"],
        variables=variables,
        moments=_moment_table(data.get("moments")),
        psi_moments=_moment_table(data.get("psi_moments")),
        beta_moments=_moment_table(data.get("beta_moments")),
        states=states,
        symbolic=bool(data.get("symbolic", False)),
    )


def load_spec(path: str) -> MomentSpec:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DomainError(f"{path}: invalid JSON ({exc})") from None
    return parse_spec(data)


# -- tables --------------------------------------------------------------------------


@dataclass
class Table:
    """Rows of already-serialisable cells plus free-form metadata."""

    columns: list[str]
    rows: list[list] = field(default_factory=list)
    meta: dict = field(default_factory=dict)

    def add(self, *cells):
        self.rows.append([_cell(c) for c in cells])


def _cell(x):
    if isinstance(x, (bool, str)) or x is None:
        return x
    if isinstance(x, int):
        return x
    return to_json_value(x)


def _text(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (dict, list)):
        return format_value(from_json_value(x))
    return str(x)


def render(table: Table, fmt: str = "pretty") -> str:
    if fmt == "json":
        return json.dumps(
            {"columns": table.columns, "rows": table.rows, "meta": table.meta},
            indent=1, sort_keys=True,
        ) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(table.columns)
        for row in table.rows:
            writer.writerow([_text(c) for c in row])
        for k in sorted(table.meta):
            buf.write(f"# {k}={_text(table.meta[k])}\n")
        return buf.getvalue()
    if fmt == "pretty":
        cells = [table.columns] + [[_text(c) for c in row] for row in table.rows]
        widths = [max(len(r[i]) for r in cells) for i in range(len(table.columns))]
        lines = ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in cells]
        lines.insert(1, "  ".join("-" * w for w in widths))
        lines += [f"{k}: {_text(table.meta[k])}" for k in sorted(table.meta)]
        return "\n".join(lines) + "\n"
    raise DomainError(f"unknown format {fmt!r}")


def read_table(text: str) -> Table:
    """Parse the JSON rendering back into a :class:`Table`."""
    data = json.loads(text)
    return Table(list(data["columns"]), [list(r) for r in data["rows"]], dict(data.get("meta", {})))


def parse_word(text: str) -> tuple[str, ...]:
    """``"x,y,x"`` or ``"xyx"`` (one-letter names) into a word."""
    text = text.strip()
    if "," in text:
        return tuple(p.strip() for p in text.split(",") if p.strip())
    return tuple(text)


def parse_sequence(text: str) -> list:
    return [parse_rational(p.strip()) for p in text.split(",") if p.strip()]


def words_for(letters: Sequence[str], n: int) -> list[tuple[str, ...]]:
    """Default word per order: powers of the single letter, else cyclic words."""
    letters = list(letters) or ["x"]
    return [tuple(letters[i % len(letters)] for i in range(k)) for k in range(1, n + 1)]
