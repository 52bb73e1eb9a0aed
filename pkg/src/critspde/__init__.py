"""Critical-exponent calculus and 1d torus SPDE toolbox.

Two halves:
  * exact rational calculus for weighted parabolic settings (exponents,
    weighted time norms, bootstrap planning over Sobolev scales),
  * a pseudospectral simulator for 1d stochastic PDEs with colored noise,
    with energy/criticality monitors and a Monte Carlo harness.
"""
from .bootstrap import (
    BootstrapChain,
    BootstrapCheck,
    BootstrapError,
    BootstrapStep,
    TerminalClaim,
    chain_composition_ok,
    chain_to_dict,
    check_extrapolation,
    embeds,
    emb_condition,
    full_chain_1d,
    plan_space_bootstrap,
    plan_time_bootstrap,
    plan_weight_insertion,
    weighted_trace,
)
from .exponents import (
    BesovDescriptor,
    ClauseSelection,
    CriticalityReport,
    GrowthSpec,
    GrowthTerm,
    GrowthWindowError,
    InterpolationExponents,
    ParameterError,
    PerturbationMargin,
    SerrinReport,
    Setting,
    SobolevScale,
    StarParams,
    TermExponents,
    XEntry,
    XiExponents,
    as_fraction,
    criterion_select,
    critical_weight,
    full_report,
    interpolation_exponents,
    one_d_growth_params,
    perturbation_margin,
    rho_star_and_x_exponents,
    serrin_applicable,
    star_params,
    subcriticality,
    trace_space,
    xi_exponents,
)
from .harness import (
    ConvergenceReport,
    EnergyReport,
    EnsembleConfig,
    EnsembleStats,
    RegularityReport,
    SurvivalReport,
    convergence_study,
    experiment_energy,
    experiment_global,
    experiment_regularity,
    mc_run,
    mix_seed,
    run_ensemble,
)
from .monitors import (
    HoelderFit,
    MonitorSeries,
    XNormValue,
    blowup_functional,
    hoelder_estimate,
    hs_norm_G,
    ito_energy_residual,
    spatial_norm,
    x_space_norm,
)
from .sim import (
    BlowUpSignal,
    NoiseSpec,
    NonlinearitySpec,
    SimConfig,
    TorusGrid,
    Trajectory,
    basis_coefficient,
    draw_increments,
    drift_pairing,
    simulate_path,
)
from .weights import (
    LimitingCaseError,
    PowerWeight,
    SampledFunction,
    TimeGrid,
    slobodeckij_seminorm,
    weighted_lp_norm,
)

__all__ = [
    "BesovDescriptor",
    "BlowUpSignal",
    "BootstrapChain",
    "BootstrapCheck",
    "BootstrapError",
    "BootstrapStep",
    "ClauseSelection",
    "ConvergenceReport",
    "CriticalityReport",
    "EnergyReport",
    "EnsembleConfig",
    "EnsembleStats",
    "GrowthSpec",
    "GrowthTerm",
    "GrowthWindowError",
    "HoelderFit",
    "InterpolationExponents",
    "LimitingCaseError",
    "MonitorSeries",
    "NoiseSpec",
    "NonlinearitySpec",
    "ParameterError",
    "PerturbationMargin",
    "PowerWeight",
    "RegularityReport",
    "SampledFunction",
    "SerrinReport",
    "Setting",
    "SimConfig",
    "SobolevScale",
    "StarParams",
    "SurvivalReport",
    "TerminalClaim",
    "TermExponents",
    "TimeGrid",
    "TorusGrid",
    "Trajectory",
    "XEntry",
    "XNormValue",
    "XiExponents",
    "as_fraction",
    "basis_coefficient",
    "blowup_functional",
    "chain_composition_ok",
    "chain_to_dict",
    "check_extrapolation",
    "convergence_study",
    "criterion_select",
    "critical_weight",
    "draw_increments",
    "drift_pairing",
    "emb_condition",
    "embeds",
    "experiment_energy",
    "experiment_global",
    "experiment_regularity",
    "full_chain_1d",
    "full_report",
    "hoelder_estimate",
    "hs_norm_G",
    "interpolation_exponents",
    "ito_energy_residual",
    "mc_run",
    "mix_seed",
    "one_d_growth_params",
    "perturbation_margin",
    "plan_space_bootstrap",
    "plan_time_bootstrap",
    "plan_weight_insertion",
    "rho_star_and_x_exponents",
    "run_ensemble",
    "serrin_applicable",
    "simulate_path",
    "slobodeckij_seminorm",
    "spatial_norm",
    "star_params",
    "subcriticality",
    "trace_space",
    "weighted_lp_norm",
    "weighted_trace",
    "x_space_norm",
    "xi_exponents",
]

__version__ = "0.1.0"
