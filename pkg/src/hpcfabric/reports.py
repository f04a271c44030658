"""Report assembly and rendering (CSV and aligned text).

Values are formatted once, when a row is added, so CSV and text output show
identical strings. Output is deterministic: no timestamps, no locale, fixed
column order.
"""

from __future__ import annotations

import csv
import io
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path


def fmt_db(x: float | None) -> str:
    return "" if x is None else f"{x:.2f}"


def fmt_ber(x: float) -> str:
    return f"{x:.2e}"


def fmt_num(x: float | int | None, decimals: int | None = None) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "yes" if x else "no"
    if isinstance(x, int):
        return str(x)
    if decimals is not None:
        return f"{x:.{decimals}f}"
    if float(x).is_integer():
        return str(int(x))
    return f"{x:.6g}"


@dataclass
class Table:
    name: str
    columns: list[str]
    rows: list[list[str]] = field(default_factory=list)

    def add(self, *values) -> None:
        if len(values) != len(self.columns):
            raise ValueError(f"{self.name}: expected {len(self.columns)} values, got {len(values)}")
        self.rows.append([v if isinstance(v, str) else fmt_num(v) for v in values])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)
        return buf.getvalue()

    def to_text(self) -> str:
        widths = [len(c) for c in self.columns]
        for row in self.rows:
            widths = [max(w, len(v)) for w, v in zip(widths, row)]

        def line(cells):
            return "  ".join(c.ljust(w) for c, w in zip(cells, widths)).rstrip()

        out = [line(self.columns), line(["-" * w for w in widths])]
        out.extend(line(r) for r in self.rows)
        return "\n".join(out) + "\n"


@dataclass
class Report:
    command: str
    input_digest: str
    tables: list[Table] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    primary: str | None = None

    def table(self, name: str) -> Table:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(name)

    def add_table(self, table: Table) -> Table:
        self.tables.append(table)
        return table

    def primary_table(self) -> Table:
        return self.table(self.primary) if self.primary else self.tables[0]

    def to_text(self) -> str:
        parts = [f"command: {self.command}", f"input sha256: {self.input_digest}", ""]
        for t in self.tables:
            parts.append(f"[{t.name}]")
            parts.append(t.to_text())
        if self.notes:
            parts.append("notes:")
            parts.extend(f"  - {n}" for n in self.notes)
            parts.append("")
        return "\n".join(parts)


def write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_report(report: Report, out_dir: str | Path, prefix: str) -> list[Path]:
    """Write every table as ``<prefix>_<table>.csv`` plus ``<prefix>_report.txt``."""
    out_dir = Path(out_dir)
    written = []
    for t in report.tables:
        p = out_dir / f"{prefix}_{t.name}.csv"
        write_atomic(p, t.to_csv())
        written.append(p)
    p = out_dir / f"{prefix}_report.txt"
    write_atomic(p, report.to_text())
    written.append(p)
    return written
