"""Nearest-neighbour retrieval of labelled sequences under an alignment method."""
from __future__ import annotations

import logging
from typing import Callable, List, Optional, Sequence as Seq

import numpy as np

from ..ctw import ctw_align
from ..errors import DataError, DimensionMismatchError, NumericalError
from ..lsdtw import LsdtwConfig, lsdtw_align
from ..seqcore import AlignmentPath, Sequence, as_sequence
from ..warp import dtw_align

log = logging.getLogger(__name__)

METHODS = ("dtw", "ctw", "lsdtw")


def align_pair(method: str, x, y, seed: int = 0, init_path: Optional[AlignmentPath] = None,
               lsdtw_config: Optional[LsdtwConfig] = None) -> AlignmentPath:
    if method == "dtw":
        return dtw_align(x, y)[0]
    if method == "ctw":
        return ctw_align(x, y, init_path=init_path).path
    if method == "lsdtw":
        cfg = lsdtw_config or LsdtwConfig(seed=seed, init_path=init_path)
        return lsdtw_align(x, y, cfg).path
    raise DataError(f"unknown method {method!r}; expected one of {METHODS}")


def path_distance(x, y, path: AlignmentPath) -> float:
    """Mean Euclidean distance between the samples paired by ``path``."""
    x, y = as_sequence(x), as_sequence(y)
    if x.d != y.d:
        raise DimensionMismatchError(
            f"distance along a path needs equal dimensionality, got {x.d} and {y.d}"
        )
    ix, iy = path.zero_based()
    return float(np.linalg.norm(x.samples[ix] - y.samples[iy], axis=1).sum() / path.m)


def retrieval_distances(queries: Seq[Sequence], database: Seq[Sequence], method: str,
                        seed: int = 0) -> np.ndarray:
    """``D[q, k]`` = path distance after aligning query ``q`` with item ``k``; failures give ``inf``."""
    D = np.empty((len(queries), len(database)))
    for qi, q in enumerate(queries):
        for ki, item in enumerate(database):
            try:
                D[qi, ki] = path_distance(q, item, align_pair(method, q, item, seed))
            except (DataError, NumericalError) as exc:
                log.warning("%s failed on query %d vs item %d: %s", method, qi, ki, exc)
                D[qi, ki] = np.inf
    return D


def accuracy_at(D: np.ndarray, query_labels: Seq[str], db_labels: Seq[str], N: int) -> float:
    """Fraction of queries whose ``N`` nearest items include one with the same label."""
    if not 1 <= N <= D.shape[1]:
        raise DataError(f"N must be in 1..{D.shape[1]}, got {N}")
    db_labels = np.asarray(db_labels)
    hits = 0
    for qi, lab in enumerate(query_labels):
        nearest = np.argsort(D[qi], kind="stable")[:N]
        hits += bool(np.any(db_labels[nearest] == lab))
    return hits / len(query_labels)


def retrieval_benchmark(queries: Seq[Sequence], database: Seq[Sequence], method: str,
                        N: int = 10, seed: int = 0) -> float:
    if N > len(database):
        raise DataError(f"N={N} exceeds database size {len(database)}")
    D = retrieval_distances(queries, database, method, seed)
    return accuracy_at(D, [q.id for q in queries], [d.id for d in database], N)
