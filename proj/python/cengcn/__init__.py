"""Centrality-aware graph convolution: transform, train and evaluate on scale-free graphs."""

from ._cengcn import (
    ConfigError,
    DataError,
    Error,
    Graph,
    IoError,
    NumericError,
    accuracy,
    auc,
    config_keys,
    degree_centrality,
    eigenvector_centrality,
    generate_planted,
    generate_scale_free,
    hub_count,
    load_edge_list,
    nmi,
    power_law_alpha,
    propagate,
    resolve_config,
    run,
    select_hubs,
    similarity_sign,
    transform,
    transition_matrix,
)

__all__ = [
    "ConfigError",
    "DataError",
    "Error",
    "Graph",
    "IoError",
    "NumericError",
    "accuracy",
    "auc",
    "config_keys",
    "degree_centrality",
    "eigenvector_centrality",
    "generate_planted",
    "generate_scale_free",
    "hub_count",
    "load_edge_list",
    "nmi",
    "power_law_alpha",
    "propagate",
    "resolve_config",
    "run",
    "select_hubs",
    "similarity_sign",
    "transform",
    "transition_matrix",
]
