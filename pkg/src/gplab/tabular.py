"""Deterministic CSV and JSON tables with a metadata header.

CSV layout::

    # gplab-version: 0.1.0
    # subcommand: kummer
    # config-sha256: <hex>
    # config: {"d":13,...}
    col_a,col_b,...
    <rows>

Floats are written with 17 significant digits so that they round-trip.
Files are written to a temporary sibling and renamed into place.
"""
from __future__ import annotations

import csv
import hashlib
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass

from .errors import ConfigError

_META_KEYS = ("gplab-version", "subcommand", "config-sha256", "config")


class TableError(ConfigError):
    """An input table is missing, truncated or malformed."""


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"),
                      allow_nan=False)


def config_hash(config: dict) -> str:
    return hashlib.sha256(canonical_json(config).encode()).hexdigest()


def format_cell(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, float):
        s = format(x, ".17g")
        # keep integral floats distinguishable from ints on read-back
        return s if any(c in s for c in ".enia") else s + ".0"
    s = str(x)
    if any(c in s for c in "\n\r"):
        raise ValueError(f"cell {s!r} contains a line break")
    return s


def parse_cell(s: str):
    if s == "true":
        return True
    if s == "false":
        return False
    try:
        return int(s)
    except ValueError:
        pass
    try:
        return float(s)
    except ValueError:
        return s


def _json_cell(x):
    if isinstance(x, float) and not math.isfinite(x):
        return format_cell(x)
    return x


@dataclass(frozen=True)
class Table:
    """Rows of one subcommand run.

    Attributes
    ----------
    subcommand : str
    config : dict
        Effective configuration without output settings; hashed into the
        header.
    columns : tuple of str
    rows : tuple of tuple
    version : str
    """

    subcommand: str
    config: dict
    columns: tuple
    rows: tuple
    version: str

    def __post_init__(self):
        for row in self.rows:
            if len(row) != len(self.columns):
                raise ValueError("row length does not match the columns")

    @property
    def config_sha256(self) -> str:
        return config_hash(self.config)

    def column(self, name: str) -> list:
        j = self.columns.index(name)
        return [row[j] for row in self.rows]

    def records(self) -> list[dict]:
        return [dict(zip(self.columns, row)) for row in self.rows]

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# gplab-version: {self.version}\n")
        buf.write(f"# subcommand: {self.subcommand}\n")
        buf.write(f"# config-sha256: {self.config_sha256}\n")
        buf.write(f"# config: {canonical_json(self.config)}\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([format_cell(x) for x in row])
        return buf.getvalue()

    def to_json(self) -> str:
        doc = {"gplab-version": self.version, "subcommand": self.subcommand,
               "config-sha256": self.config_sha256, "config": self.config,
               "columns": list(self.columns),
               "rows": [[_json_cell(x) for x in row] for row in self.rows]}
        return json.dumps(doc, indent=1, sort_keys=True,
                          allow_nan=False) + "\n"


def render(table: Table, fmt: str) -> str:
    if fmt == "csv":
        return table.to_csv()
    if fmt == "json":
        return table.to_json()
    raise ConfigError(f"unknown format {fmt!r}")


def write_atomic(path: str, text: str) -> None:
    """Write ``text`` to a temporary file next to ``path``, then rename."""
    path = os.path.abspath(path)
    folder = os.path.dirname(path)
    os.makedirs(folder, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-",
                               suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _parse_csv(text: str, path: str) -> Table:
    lines = text.split("\n")
    meta = {}
    for key, line in zip(_META_KEYS, lines):
        prefix = f"# {key}: "
        if not line.startswith(prefix):
            raise TableError(f"{path}: missing '{key}' header line")
        meta[key] = line[len(prefix):]
    try:
        config = json.loads(meta["config"])
    except json.JSONDecodeError as exc:
        raise TableError(f"{path}: config header is not JSON") from exc
    body = list(csv.reader(lines[len(_META_KEYS):]))
    body = [r for r in body if r]
    if not body:
        raise TableError(f"{path}: no column header")
    cols = tuple(body[0])
    rows = []
    for k, r in enumerate(body[1:], start=2):
        if len(r) != len(cols):
            raise TableError(f"{path}: row {k} has {len(r)} cells, "
                             f"expected {len(cols)}")
        rows.append(tuple(parse_cell(c) for c in r))
    if not text.endswith("\n"):
        raise TableError(f"{path}: truncated (no final newline)")
    t = Table(meta["subcommand"], config, cols, tuple(rows),
              meta["gplab-version"])
    if t.config_sha256 != meta["config-sha256"]:
        raise TableError(f"{path}: config hash mismatch")
    return t


def _parse_json(text: str, path: str) -> Table:
    try:
        doc = json.loads(text)
        cols = tuple(doc["columns"])
        rows = tuple(tuple(parse_cell(x) if isinstance(x, str) else x
                           for x in r) for r in doc["rows"])
        t = Table(doc["subcommand"], doc["config"], cols, rows,
                  doc["gplab-version"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise TableError(f"{path}: malformed JSON table ({exc})") from exc
    if t.config_sha256 != doc.get("config-sha256"):
        raise TableError(f"{path}: config hash mismatch")
    return t


def read_table(path: str) -> Table:
    """Load a table written by :func:`write_atomic`; raise TableError if bad."""
    try:
        with open(path, encoding="utf-8", newline="") as fh:
            text = fh.read()
    except OSError as exc:
        raise TableError(f"{path}: cannot read ({exc.strerror})") from exc
    if path.endswith(".json"):
        return _parse_json(text, path)
    return _parse_csv(text, path)
