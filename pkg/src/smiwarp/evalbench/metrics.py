"""Path-to-path alignment error."""
import numpy as np
from scipy.spatial.distance import cdist

from ..errors import DataError
from ..seqcore import AlignmentPath


def path_dist(p1: AlignmentPath, p2: AlignmentPath) -> float:
    """Sum over points of ``p1`` of the Euclidean distance to the nearest point of ``p2``."""
    return float(cdist(p1.points(), p2.points()).min(axis=1).sum())


def alignment_error(truth: AlignmentPath, estimate: AlignmentPath) -> float:
    """Symmetrized nearest-point distance normalized by ``m_truth + m_estimate``."""
    if truth.shape != estimate.shape:
        raise DataError(
            f"paths cover different grids: {truth.shape} vs {estimate.shape}"
        )
    return (path_dist(truth, estimate) + path_dist(estimate, truth)) / (truth.m + estimate.m)
