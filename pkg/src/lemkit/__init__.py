"""lemkit: polynomial lemniscates, capacity, and component-count experiments."""

from .constructions import (
    chebyshev_monic,
    cluster_construction,
    composed_period_m,
    ehp_polynomial,
    faber_polynomials,
    lemniscate_power,
    roots_of_unity_poly,
    scaled_ehp,
)
from .experiments import (
    ExperimentConfig,
    TrialSummary,
    ehp_census,
    estimate_mean_component_ratio,
    fekete_lemniscate_experiment,
    min_pairwise_distance,
    random_lemniscate_trial,
)
from .lemniscate import (
    ComponentReport,
    count_by_critical_values,
    count_by_grid,
    count_components,
    certify_isolated,
    isolated_component_test,
    render_svg,
)
from .polycore import MonicPolynomial, load_polynomial, save_polynomial
from .potential import (
    CompactSetModel,
    WeightedPointSet,
    capacity_estimate,
    energy,
    equilibrium_sample,
    leja_points,
    log_potential,
    transfinite_diameter,
)
from .rootfind import all_roots, critical_points, solve_preimages

__all__ = [
    "MonicPolynomial",
    "load_polynomial",
    "save_polynomial",
    "all_roots",
    "critical_points",
    "solve_preimages",
    "ComponentReport",
    "count_by_critical_values",
    "count_by_grid",
    "count_components",
    "certify_isolated",
    "isolated_component_test",
    "render_svg",
    "CompactSetModel",
    "WeightedPointSet",
    "capacity_estimate",
    "energy",
    "equilibrium_sample",
    "leja_points",
    "log_potential",
    "transfinite_diameter",
    "chebyshev_monic",
    "cluster_construction",
    "composed_period_m",
    "ehp_polynomial",
    "faber_polynomials",
    "lemniscate_power",
    "roots_of_unity_poly",
    "scaled_ehp",
    "ExperimentConfig",
    "TrialSummary",
    "ehp_census",
    "estimate_mean_component_ratio",
    "fekete_lemniscate_experiment",
    "min_pairwise_distance",
    "random_lemniscate_trial",
]

__version__ = "0.1.0"
