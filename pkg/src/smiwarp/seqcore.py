"""Sequences, alignment paths and the constraints every path must satisfy.

Time indices on every public surface are 1-based. ``AlignmentPath`` stores
them that way; use :meth:`AlignmentPath.zero_based` for numpy indexing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence as Seq, Tuple

import numpy as np

from .errors import DataError, InvalidPathError


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Sequence:
    """A time-ordered ``(n, d)`` matrix of samples."""

    samples: np.ndarray
    id: Optional[str] = None

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=np.float64)
        if s.ndim == 1:
            s = s[:, None]
        if s.ndim != 2:
            raise DataError(f"sequence must be a 2-D array, got shape {s.shape}")
        if s.shape[0] < 1 or s.shape[1] < 1:
            raise DataError(f"sequence needs n >= 1 and d >= 1, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise DataError("sequence contains NaN or infinite entries")
        object.__setattr__(self, "samples", _frozen(s))

    @property
    def n(self) -> int:
        return self.samples.shape[0]

    @property
    def d(self) -> int:
        return self.samples.shape[1]

    def __len__(self):
        return self.n


def as_sequence(x) -> Sequence:
    return x if isinstance(x, Sequence) else Sequence(x)


@dataclass(frozen=True, eq=False)
class AlignmentPath:
    """Paired 1-based indices ``(pi_x[t], pi_y[t])`` for ``t = 1..m``.

    Construction does not validate the constraints; call
    :func:`validate_path` (or :meth:`check`) for that.
    """

    pi_x: np.ndarray
    pi_y: np.ndarray

    def __post_init__(self):
        px = np.asarray(self.pi_x, dtype=np.int64).ravel()
        py = np.asarray(self.pi_y, dtype=np.int64).ravel()
        object.__setattr__(self, "pi_x", _frozen(px))
        object.__setattr__(self, "pi_y", _frozen(py))

    @property
    def m(self) -> int:
        return len(self.pi_x)

    def __len__(self):
        return self.m

    def __eq__(self, other):
        if not isinstance(other, AlignmentPath):
            return NotImplemented
        return np.array_equal(self.pi_x, other.pi_x) and np.array_equal(self.pi_y, other.pi_y)

    __hash__ = None

    def __repr__(self):
        return f"AlignmentPath(m={self.m}, end=({self.pi_x[-1] if self.m else '-'}, {self.pi_y[-1] if self.m else '-'}))"

    def zero_based(self) -> Tuple[np.ndarray, np.ndarray]:
        return self.pi_x - 1, self.pi_y - 1

    def points(self) -> np.ndarray:
        """``(m, 2)`` float array of 1-based index pairs."""
        return np.column_stack([self.pi_x, self.pi_y]).astype(np.float64)

    @property
    def shape(self) -> Tuple[int, int]:
        """``(n_x, n_y)`` implied by the path's end point."""
        if self.m == 0:
            raise DataError("empty path has no end point")
        return int(self.pi_x[-1]), int(self.pi_y[-1])

    def check(self, n_x: int, n_y: int) -> "AlignmentPath":
        verdict = validate_path(self, n_x, n_y)
        if not verdict:
            raise InvalidPathError(verdict)
        return self

    def to_dict(self) -> dict:
        return {"pi_x": self.pi_x.tolist(), "pi_y": self.pi_y.tolist(), "m": self.m}

    @classmethod
    def from_dict(cls, d: dict) -> "AlignmentPath":
        try:
            path = cls(d["pi_x"], d["pi_y"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DataError(f"malformed path record: {exc}") from exc
        if "m" in d and int(d["m"]) != path.m:
            raise DataError(f"path record says m={d['m']} but holds {path.m} index pairs")
        return path

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]]) -> "AlignmentPath":
        pairs = list(pairs)
        return cls([p[0] for p in pairs], [p[1] for p in pairs])


@dataclass(frozen=True)
class PathVerdict:
    ok: bool
    violation: Optional[str] = None  # "shape" | "boundary" | "monotonicity" | "continuity" | "stationary"
    detail: str = ""

    def __bool__(self):
        return self.ok

    def __str__(self):
        return "OK" if self.ok else f"{self.violation} violation: {self.detail}"


def validate_path(path: AlignmentPath, n_x: int, n_y: int) -> PathVerdict:
    """Check a path against the alignment constraints for lengths ``(n_x, n_y)``.

    Returns a verdict naming the first violated constraint. Order of checks:
    shape, boundary, then per step monotonicity, continuity, stationarity.
    """
    px, py = path.pi_x, path.pi_y
    if len(px) != len(py):
        return PathVerdict(False, "shape", f"pi_x has {len(px)} entries, pi_y has {len(py)}")
    if len(px) == 0:
        return PathVerdict(False, "shape", "empty path")
    if px.min() < 1 or px.max() > n_x or py.min() < 1 or py.max() > n_y:
        return PathVerdict(False, "shape", f"indices outside 1..{n_x} x 1..{n_y}")
    if px[0] != 1 or py[0] != 1:
        return PathVerdict(False, "boundary", f"path starts at ({px[0]}, {py[0]}), expected (1, 1)")
    if px[-1] != n_x or py[-1] != n_y:
        return PathVerdict(
            False, "boundary", f"path ends at ({px[-1]}, {py[-1]}), expected ({n_x}, {n_y})"
        )
    dx, dy = np.diff(px), np.diff(py)
    for t in range(len(dx)):
        if dx[t] < 0 or dy[t] < 0:
            return PathVerdict(False, "monotonicity", f"index decreases at step {t + 2}")
        if dx[t] > 1 or dy[t] > 1:
            return PathVerdict(
                False, "continuity", f"jump of ({dx[t]}, {dy[t]}) at step {t + 2}"
            )
        if dx[t] == 0 and dy[t] == 0:
            return PathVerdict(False, "stationary", f"repeated point at step {t + 2}")
    return PathVerdict(True)


@dataclass(frozen=True, eq=False)
class AlignedPairs:
    """The ``m`` sample pairs selected by a path, stored as two row-aligned matrices."""

    x: np.ndarray
    y: np.ndarray
    path: Optional[AlignmentPath] = field(default=None)

    def __post_init__(self):
        x = np.asarray(self.x, dtype=np.float64)
        y = np.asarray(self.y, dtype=np.float64)
        if x.ndim == 1:
            x = x[:, None]
        if y.ndim == 1:
            y = y[:, None]
        if x.shape[0] != y.shape[0]:
            raise DataError(f"paired sides differ in length: {x.shape[0]} vs {y.shape[0]}")
        object.__setattr__(self, "x", _frozen(x))
        object.__setattr__(self, "y", _frozen(y))

    @property
    def m(self) -> int:
        return self.x.shape[0]

    def __len__(self):
        return self.m

    def __getitem__(self, i):
        return self.x[i], self.y[i]

    def subset(self, idx: Seq[int]) -> "AlignedPairs":
        idx = np.asarray(idx, dtype=np.int64)
        return AlignedPairs(self.x[idx], self.y[idx])


def gather_pairs(x, y, path: AlignmentPath) -> AlignedPairs:
    x, y = as_sequence(x), as_sequence(y)
    path.check(x.n, y.n)
    ix, iy = path.zero_based()
    return AlignedPairs(x.samples[ix], y.samples[iy], path)


def expand_anchors(anchors: Iterable[Tuple[int, int]]) -> AlignmentPath:
    """Join non-decreasing anchor points with unit steps.

    Between consecutive anchors the faster-moving index advances alone
    until both remaining gaps are equal, then both advance together.
    Repeated anchors are dropped.
    """
    out = []
    prev = None
    for a in anchors:
        a = (int(a[0]), int(a[1]))
        if prev is None:
            out.append(a)
            prev = a
            continue
        dx, dy = a[0] - prev[0], a[1] - prev[1]
        if dx < 0 or dy < 0:
            raise DataError(f"anchors are not monotone: {prev} -> {a}")
        i, j = prev
        while dx > dy:
            i += 1
            dx -= 1
            out.append((i, j))
        while dy > dx:
            j += 1
            dy -= 1
            out.append((i, j))
        for _ in range(dx):
            i += 1
            j += 1
            out.append((i, j))
        prev = a
    return AlignmentPath.from_pairs(out)


def uniform_anchors(n_x: int, n_y: int) -> Tuple[np.ndarray, np.ndarray]:
    """Raw uniform initialization indices, ``m = min(n_x, n_y)``, last entry forced to the end."""
    if n_x < 1 or n_y < 1:
        raise DataError("sequence lengths must be >= 1")
    m = min(n_x, n_y)
    t = np.arange(m)
    # integer arithmetic keeps floor exact
    px = 1 + (t * n_x) // m
    py = 1 + (t * n_y) // m
    px[-1], py[-1] = n_x, n_y
    return px, py


def uniform_init(n_x: int, n_y: int) -> AlignmentPath:
    px, py = uniform_anchors(n_x, n_y)
    anchors = list(zip(px.tolist(), py.tolist()))
    if anchors[0] != (1, 1):
        anchors.insert(0, (1, 1))
    return expand_anchors(anchors)


def diagonal_path(n: int) -> AlignmentPath:
    idx = np.arange(1, n + 1)
    return AlignmentPath(idx, idx)
