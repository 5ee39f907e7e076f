"""Text interchange formats shared with external consumers.

.gmx matrix file:  "GMX 1 <rows> <cols> <int|real>" then one whitespace line
per row; integers are bit-exact, reals carry 17 significant digits.
.pts point file:   "PTS 1 <count> <D>" then "<x> <y>" per line.
Dataset directory: case_<k>.X.gmx / case_<k>.K.gmx pairs plus manifest.tsv.
"""

import csv
import os
from dataclasses import dataclass

import numpy as np


class ParseError(ValueError):
    """Malformed interchange file; message carries path and line number."""


def _fmt_real(x: float) -> str:
    return format(float(x), ".17g")


def write_matrix(path, matrix) -> None:
    m = np.asarray(matrix)
    if m.ndim != 2:
        raise ValueError(f"matrix must be 2-D, got shape {m.shape}")
    is_int = np.issubdtype(m.dtype, np.integer)
    kind = "int" if is_int else "real"
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"GMX 1 {m.shape[0]} {m.shape[1]} {kind}\n")
        for row in m:
            if is_int:
                fh.write(" ".join(str(int(v)) for v in row))
            else:
                fh.write(" ".join(_fmt_real(v) for v in row))
            fh.write("\n")


def read_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header:
            raise ParseError(f"{path}:1: empty file")
        parts = header.split()
        if len(parts) != 5 or parts[0] != "GMX" or parts[1] != "1":
            raise ParseError(f"{path}:1: bad header {header.strip()!r}")
        try:
            rows, cols = int(parts[2]), int(parts[3])
        except ValueError:
            raise ParseError(f"{path}:1: non-integer dimensions in header") from None
        kind = parts[4]
        if kind not in ("int", "real"):
            raise ParseError(f"{path}:1: unknown value kind {kind!r}")
        if rows < 1 or cols < 1:
            raise ParseError(f"{path}:1: dimensions must be positive")
        dtype = np.int64 if kind == "int" else np.float64
        out = np.empty((rows, cols), dtype=dtype)
        for i in range(rows):
            line = fh.readline()
            lineno = i + 2
            if not line:
                raise ParseError(f"{path}:{lineno}: expected {rows} data rows, found {i}")
            tokens = line.split()
            if len(tokens) != cols:
                raise ParseError(
                    f"{path}:{lineno}: expected {cols} values, got {len(tokens)}"
                )
            try:
                if kind == "int":
                    out[i] = [int(t) for t in tokens]
                else:
                    out[i] = [float(t) for t in tokens]
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
        trailer = fh.readline()
        if trailer.strip():
            raise ParseError(f"{path}:{rows + 2}: trailing data after {rows} rows")
    if not np.isfinite(out).all():
        raise ParseError(f"{path}: non-finite matrix entry")
    if (out < 0).any():
        raise ParseError(f"{path}: negative matrix entry")
    return out


def write_points(path, points, side_d: float) -> None:
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(f"PTS 1 {pts.shape[0]} {_fmt_real(side_d)}\n")
        for x, y in pts:
            fh.write(f"{_fmt_real(x)} {_fmt_real(y)}\n")


def read_points(path):
    """Read a .pts file -> (points (n, 2) float64, side_d)."""
    with open(path, "r", encoding="ascii") as fh:
        header = fh.readline()
        if not header:
            raise ParseError(f"{path}:1: empty file")
        parts = header.split()
        if len(parts) != 4 or parts[0] != "PTS" or parts[1] != "1":
            raise ParseError(f"{path}:1: bad header {header.strip()!r}")
        try:
            count = int(parts[2])
            side_d = float(parts[3])
        except ValueError:
            raise ParseError(f"{path}:1: bad count or side length") from None
        pts = np.empty((count, 2), dtype=np.float64)
        for i in range(count):
            line = fh.readline()
            lineno = i + 2
            if not line:
                raise ParseError(f"{path}:{lineno}: expected {count} points, found {i}")
            tokens = line.split()
            if len(tokens) != 2:
                raise ParseError(f"{path}:{lineno}: expected 'x y', got {len(tokens)} tokens")
            try:
                pts[i, 0] = float(tokens[0])
                pts[i, 1] = float(tokens[1])
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
        trailer = fh.readline()
        if trailer.strip():
            raise ParseError(f"{path}:{count + 2}: trailing data after {count} points")
    if not np.isfinite(pts).all():
        raise ParseError(f"{path}: non-finite coordinate")
    return pts, side_d


MANIFEST_FIELDS = ["case_id", "seed", "p", "ratio_r", "template_alg", "uav_count", "optimal"]


@dataclass
class ManifestRow:
    case_id: int
    seed: int
    p: int
    ratio_r: float
    template_alg: str
    uav_count: int
    optimal: bool


def write_manifest(path, rows) -> None:
    with open(path, "w", encoding="ascii", newline="") as fh:
        writer = csv.writer(fh, delimiter="\t", lineterminator="\n")
        writer.writerow(MANIFEST_FIELDS)
        for r in rows:
            writer.writerow(
                [r.case_id, r.seed, r.p, _fmt_real(r.ratio_r), r.template_alg, r.uav_count, int(r.optimal)]
            )


def read_manifest(path):
    rows = []
    with open(path, "r", encoding="ascii", newline="") as fh:
        reader = csv.reader(fh, delimiter="\t")
        header = next(reader, None)
        if header != MANIFEST_FIELDS:
            raise ParseError(f"{path}:1: bad manifest header {header!r}")
        for lineno, rec in enumerate(reader, start=2):
            if not rec:
                continue
            if len(rec) != len(MANIFEST_FIELDS):
                raise ParseError(f"{path}:{lineno}: expected {len(MANIFEST_FIELDS)} fields")
            try:
                rows.append(
                    ManifestRow(
                        case_id=int(rec[0]),
                        seed=int(rec[1]),
                        p=int(rec[2]),
                        ratio_r=float(rec[3]),
                        template_alg=rec[4],
                        uav_count=int(rec[5]),
                        optimal=bool(int(rec[6])),
                    )
                )
            except ValueError as exc:
                raise ParseError(f"{path}:{lineno}: {exc}") from None
    return rows


def case_path(directory, case_id: int, tag: str):
    return os.path.join(directory, f"case_{case_id}.{tag}.gmx")
