"""Precomputed placement oracles: exact minimum, drift and what-if queries."""

from ._core import (
    BuildConfig,
    BuildReport,
    DataCenter,
    DimensionMismatch,
    DriftResult,
    Error,
    InputError,
    LatencyMatrix,
    MinResult,
    Oracle,
    ScenarioSummary,
    build_oracle,
    generate_samples,
    haversine_km,
    load_datacenters,
    load_latency_matrix,
    load_oracle,
    load_trace,
    make_synthetic_topology,
    query_drift_directed,
    query_drift_undirected,
    query_minimum,
    simulate_scenario,
    solve_exhaustive,
)

__all__ = [name for name in dir() if not name.startswith("_")]
