"""Alternating-resolvent flows on the line and in 1D transport geometry."""

from ._core import (
    barenblatt_quantiles,
    compatibility,
    entropy,
    exact_flow,
    flow_time_of,
    gaussian_quantiles,
    gronwall_bound,
    normal_quantile,
    ou_exact,
    potential_energy,
    prox_quadratic,
    resolvent_entropy,
    resolvent_potential,
    run_euclidean,
    run_wasserstein,
    transport_optimality_residual,
    w2_distance,
)

__all__ = [
    "barenblatt_quantiles",
    "compatibility",
    "entropy",
    "exact_flow",
    "flow_time_of",
    "gaussian_quantiles",
    "gronwall_bound",
    "normal_quantile",
    "ou_exact",
    "potential_energy",
    "prox_quadratic",
    "resolvent_entropy",
    "resolvent_potential",
    "run_euclidean",
    "run_wasserstein",
    "transport_optimality_residual",
    "w2_distance",
]
