"""Tree-sliced Wasserstein distances and kernels (C++ core)."""

from ._core import (
    Ensemble,
    IoError,
    ValidationError,
    augment_pair,
    bandwidth_from_quantile,
    build_clustering_tree,
    build_partition_tree,
    check_negative_definite,
    check_w2_bound,
    exact_ot,
    farthest_point_clustering,
    generate_orbit,
    generate_orbit_dataset,
    gram,
    load_ensemble,
    project_diagonal,
    optimal_assignment,
    run_suite,
    sample_ensemble,
    sliced_wasserstein,
    tree_wasserstein,
    tsw_kernel,
)

__all__ = [
    "Ensemble",
    "IoError",
    "ValidationError",
    "augment_pair",
    "bandwidth_from_quantile",
    "build_clustering_tree",
    "build_partition_tree",
    "check_negative_definite",
    "check_w2_bound",
    "exact_ot",
    "farthest_point_clustering",
    "generate_orbit",
    "generate_orbit_dataset",
    "gram",
    "load_ensemble",
    "project_diagonal",
    "optimal_assignment",
    "run_suite",
    "sample_ensemble",
    "sliced_wasserstein",
    "tree_wasserstein",
    "tsw_kernel",
]
