"""Flat result records and their CSV / JSONL encodings."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Iterable

from .cuboid import Cuboid, CuboidClass, class_of_report, diagonal_report
from .search import Hit, Strategy

COLUMNS = ("a", "b", "c", "class", "d_ab", "d_ac", "d_bc", "g", "strategy", "params", "primitive")
FORMATS = ("csv", "jsonl")


@dataclass(frozen=True)
class ResultRecord:
    a: int
    b: int
    c: int
    cls: CuboidClass
    d_ab: int | None
    d_ac: int | None
    d_bc: int | None
    g: int | None
    strategy: str
    params: tuple[tuple[str, int], ...]
    primitive: bool

    @classmethod
    def from_cuboid(cls, cuboid: Cuboid, strategy: str = "verify",
                    params: tuple[tuple[str, int], ...] = ()) -> ResultRecord:
        r = diagonal_report(cuboid)
        k = r.cuboid
        return cls(k.a, k.b, k.c, class_of_report(r), r.d_ab, r.d_ac, r.d_bc, r.g,
                   strategy, tuple(params), k.is_primitive)

    @classmethod
    def from_hit(cls, hit: Hit, strategy: Strategy | str) -> ResultRecord:
        name = strategy.value if isinstance(strategy, Strategy) else strategy
        return cls.from_cuboid(hit.cuboid, name, hit.provenance)

    @property
    def cuboid(self) -> Cuboid:
        return Cuboid(self.a, self.b, self.c)

    @property
    def params_text(self) -> str:
        return ";".join(f"{k}={v}" for k, v in self.params)

    def verify(self) -> bool:
        """True when recomputing the diagonals reproduces this record."""
        return ResultRecord.from_cuboid(self.cuboid, self.strategy, self.params) == self

    def to_dict(self) -> dict:
        return {
            "a": self.a, "b": self.b, "c": self.c,
            "class": self.cls.label,
            "d_ab": self.d_ab, "d_ac": self.d_ac, "d_bc": self.d_bc, "g": self.g,
            "strategy": self.strategy,
            "params": self.params_text,
            "primitive": self.primitive,
        }

    @classmethod
    def from_dict(cls, d: dict) -> ResultRecord:
        return cls(
            int(d["a"]), int(d["b"]), int(d["c"]),
            CuboidClass.from_label(d["class"]),
            *(_opt_int(d[k]) for k in ("d_ab", "d_ac", "d_bc", "g")),
            strategy=str(d["strategy"]),
            params=_parse_params(d["params"]),
            primitive=_parse_bool(d["primitive"]),
        )


def _opt_int(v: object) -> int | None:
    if v is None or v == "":
        return None
    return int(v)


def _parse_bool(v: object) -> bool:
    if isinstance(v, bool):
        return v
    if v in ("true", "false"):
        return v == "true"
    raise ValueError(f"expected true/false, got {v!r}")


def _parse_params(text: str) -> tuple[tuple[str, int], ...]:
    if not text:
        return ()
    out = []
    for item in text.split(";"):
        k, _, v = item.partition("=")
        out.append((k, int(v)))
    return tuple(out)


def _csv_cell(v: int | None) -> str:
    return "" if v is None else str(v)


def write_records(records: Iterable[ResultRecord], fmt: str = "csv") -> bytes:
    """Encode records; the params column is always quoted in CSV."""
    if fmt not in FORMATS:
        raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
    lines = []
    if fmt == "csv":
        lines.append(",".join(COLUMNS))
        for r in records:
            params = '"' + r.params_text.replace('"', '""') + '"'
            cells = [str(r.a), str(r.b), str(r.c), r.cls.label,
                     _csv_cell(r.d_ab), _csv_cell(r.d_ac), _csv_cell(r.d_bc), _csv_cell(r.g),
                     r.strategy, params, "true" if r.primitive else "false"]
            lines.append(",".join(cells))
    else:
        for r in records:
            lines.append(json.dumps(r.to_dict(), separators=(",", ":")))
    return "".join(line + "\n" for line in lines).encode()


def parse_records(data: bytes | str, fmt: str = "csv") -> list[ResultRecord]:
    text = data.decode() if isinstance(data, bytes) else data
    if fmt == "csv":
        rows = list(csv.DictReader(io.StringIO(text, newline="")))
        return [ResultRecord.from_dict(row) for row in rows]
    if fmt == "jsonl":
        return [ResultRecord.from_dict(json.loads(line)) for line in text.splitlines() if line.strip()]
    raise ValueError(f"unknown format {fmt!r}, expected one of {FORMATS}")
