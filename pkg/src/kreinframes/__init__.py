"""Frames on finite-dimensional Krein spaces."""
from .frames import (
    ComponentOperators,
    Frame,
    FrameBounds,
    NotAFrame,
    coefficients,
    component_operators,
    grammian,
    is_frame,
    is_parseval,
    is_spanning,
    is_tight,
    optimal_bounds,
    split_components,
    synthesize,
)
from .kspace import (
    KreinSpace,
    decomposition_from_symmetry,
    indefinite_inner,
    j_norm_sq,
    project_minus,
    project_plus,
    validate_symmetry,
)
from .potential import (
    FFPartition,
    OptimizerOptions,
    ff_partition,
    frame_potential,
    is_ff_critical,
    minimize_potential,
    minimum_potential,
)
from .structure import (
    ThreeBasesDecomposition,
    coefficient_transfer,
    decompose_three_bases,
    is_exact,
    is_frame_sequence,
    merge_frames,
    near_exact_excess,
    split_by_projection,
)

__version__ = "0.1.0"
