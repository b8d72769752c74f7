"""Factor decomposition and decarbonization assessment of building operations."""

from .assess import (
    CumulativeAssessment,
    DecarbMetrics,
    PhaseShareReport,
    annual_decline_rate,
    cumulative_assessment,
    decarbonization_attribution,
    decarbonization_efficiency,
    decarbonization_intensity,
    per_capita_decarbonization,
    phase_shares,
    rank_regions,
    total_decarbonization,
)
from .core import (
    EndUse,
    EndUseRecord,
    FactorVector,
    IntensityPoint,
    MacroRecord,
    Sector,
    aggregate_emissions,
    derive_factors,
    identity_residual,
    intensity_from_factors,
    raw_intensity,
)
from .dsd import (
    DEFAULT_DELTA,
    ChainResult,
    ContributionSet,
    PeriodWindow,
    chain_decompose,
    decompose_period,
    log_mean,
    parse_stages,
    path_integral_oracle,
    stage_decompose,
    substitute_zeros,
)
from .ingest import (
    Diagnostic,
    PanelDataset,
    assemble_panel,
    parse_enduse_csv,
    parse_macro_csv,
    serialize_enduse_csv,
    serialize_macro_csv,
    synthetic_panel,
)

__version__ = "0.1.0"
