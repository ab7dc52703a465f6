"""Dependence-maximizing temporal alignment of multivariate sequences."""
from .seqcore import (
    AlignedPairs,
    AlignmentPath,
    Sequence,
    gather_pairs,
    uniform_init,
    validate_path,
)
from .warp import dtw_align, reward_dp
from .lsmi import KernelParams, cross_validate, default_grid, fit_ratio, smi_estimate
from .ctw import ctw_align
from .lsdtw import LsdtwConfig, lsdtw_align

__version__ = "0.1.0"
