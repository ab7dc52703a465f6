"""On-disk formats: sequence CSV, path/result JSON, run JSON-lines."""
from __future__ import annotations

import csv
import json
import math
from pathlib import Path
from typing import Iterable, List

import numpy as np

from .errors import DataError
from .seqcore import AlignmentPath, Sequence


def _fmt(v: float) -> str:
    # repr gives the shortest round-tripping form (17 significant digits max)
    return repr(float(v))


def write_sequence_csv(seq: Sequence, path, header: bool = True) -> None:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        if header:
            w.writerow([f"f{k}" for k in range(seq.d)])
        for row in seq.samples:
            w.writerow([_fmt(v) for v in row])


def _is_number(tok: str) -> bool:
    try:
        float(tok)
    except ValueError:
        return False
    return True


def read_sequence_csv(path, id=None) -> Sequence:
    """Read a sequence CSV. A first row that does not parse as numbers is a header."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    rows: List[List[float]] = []
    width = None
    for lineno, row in enumerate(csv.reader(text.splitlines()), start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if lineno == 1 and not all(_is_number(c) for c in row):
            continue
        try:
            vals = [float(c) for c in row]
        except ValueError:
            raise DataError(f"{path}: line {lineno}: non-numeric value in {row!r}") from None
        if width is None:
            width = len(vals)
        elif len(vals) != width:
            raise DataError(f"{path}: line {lineno}: expected {width} columns, got {len(vals)}")
        if not all(math.isfinite(v) for v in vals):
            raise DataError(f"{path}: line {lineno}: non-finite value")
        rows.append(vals)
    if not rows:
        raise DataError(f"{path}: no data rows")
    return Sequence(np.array(rows), id=id if id is not None else path.stem)


def dump_json(obj, path=None) -> str:
    text = json.dumps(obj, indent=2, allow_nan=False)
    if path is not None:
        Path(path).write_text(text + "\n", encoding="utf-8")
    return text


def load_json(path):
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise DataError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc


def write_path_json(path_obj: AlignmentPath, path) -> None:
    dump_json(path_obj.to_dict(), path)


def read_path_json(path) -> AlignmentPath:
    """Read a path file, or the ``path`` member of a result record."""
    d = load_json(path)
    if isinstance(d, dict) and "path" in d and isinstance(d["path"], dict):
        d = d["path"]
    if not isinstance(d, dict):
        raise DataError(f"{path}: expected a JSON object")
    return AlignmentPath.from_dict(d)


def append_jsonl(records: Iterable[dict], path) -> None:
    with Path(path).open("a", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, allow_nan=False) + "\n")


def read_jsonl(path) -> list:
    out = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
