"""Spectrum occupancy measurement in 3D: voxel discretization error, plane
cuts through cubes, adaptive UAV measurement and ACO tour planning."""

from ._som3d import (
    Scene,
    ValidationError,
    boundary_surface_area,
    brute_force_tour,
    cut_area,
    cut_rpe,
    discretization_rpe,
    max_offset,
    measurement_bound,
    nearest_neighbor_tour,
    plan_tour,
    predicted_rpe,
    rpe_constant,
    rpe_constant_sampled,
    rpe_sweep,
    run_som,
    som_sweep,
    validate_scenario,
)

__all__ = [
    "Scene",
    "ValidationError",
    "boundary_surface_area",
    "brute_force_tour",
    "cut_area",
    "cut_rpe",
    "discretization_rpe",
    "max_offset",
    "measurement_bound",
    "nearest_neighbor_tour",
    "plan_tour",
    "predicted_rpe",
    "rpe_constant",
    "rpe_constant_sampled",
    "rpe_sweep",
    "run_som",
    "som_sweep",
    "validate_scenario",
]
