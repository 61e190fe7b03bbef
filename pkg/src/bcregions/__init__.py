"""Rate regions and codebook probes for two-receiver broadcast channels.

Core objects: broadcast channels over finite alphabets, the two
superposition input families (two independent layers with a symbol map,
or a joint cloud/satellite distribution), their achievable rate
regions as 2-D polyhedral sets, sweep hulls over input families,
mechanical inclusion certificates, and a small-blocklength Monte Carlo
codebook simulator.
"""
from .channels import (
    BroadcastChannel,
    ChannelError,
    DegradednessResult,
    is_stochastically_degraded,
    load_channel,
    make_bsc_bc,
    make_vector_bc,
    save_channel,
)
from .geometry import (
    ConvexPolygon,
    HalfPlane,
    Region2D,
    RegionError,
    convex_hull,
    from_halfplanes,
    hausdorff_distance,
    includes,
    intersect,
    load_region,
    max_weighted_sum,
    save_region,
    symmetric_difference_area,
    union,
)
from .probability import (
    DistributionError,
    JointPmf,
    Pmf,
    conditional_mutual_information,
    entropy,
    mutual_information,
)
from .regions import (
    MiBundle,
    UVDist,
    UXDist,
    UxMiTerms,
    functional_representation,
    load_dist,
    mi_bundle_uv,
    mi_terms_ux,
    region_uv,
    region_uv_minform,
    region_ux,
    region_ux_from_terms,
    region_ux_minform,
    region_vx,
    region_vx_minform,
    save_dist,
)
from .render import DEFAULT_COLORS, region_svg
from .search import (
    SweepConfig,
    SweepOutcome,
    TimeSharingReport,
    capacity_input,
    coded_time_sharing_check,
    sweep_uv,
    sweep_ux,
    sweep_vx,
)
from .simulate import (
    Codebook,
    DecodeOutcome,
    SimulationError,
    TrialRecord,
    TrialResult,
    decode_ml,
    decode_ml_pair,
    decode_typicality,
    estimate_error,
    generate_codebook,
    is_typical,
)
from .theorem import (
    Case3Breakdown,
    CaseCheck,
    InclusionCertificate,
    StrictnessReport,
    case3_breakdown,
    classify_case,
    inclusion_margin,
    strictness_demo,
    sum_rate_triangle,
    u_only_dist,
    v_only_dist,
    verify_inclusion,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "BroadcastChannel",
    "ChannelError",
    "DegradednessResult",
    "is_stochastically_degraded",
    "load_channel",
    "make_bsc_bc",
    "make_vector_bc",
    "save_channel",
    "ConvexPolygon",
    "HalfPlane",
    "Region2D",
    "RegionError",
    "convex_hull",
    "from_halfplanes",
    "hausdorff_distance",
    "includes",
    "intersect",
    "load_region",
    "max_weighted_sum",
    "save_region",
    "symmetric_difference_area",
    "union",
    "DistributionError",
    "JointPmf",
    "Pmf",
    "conditional_mutual_information",
    "entropy",
    "mutual_information",
    "MiBundle",
    "UVDist",
    "UXDist",
    "UxMiTerms",
    "functional_representation",
    "load_dist",
    "mi_bundle_uv",
    "mi_terms_ux",
    "region_uv",
    "region_uv_minform",
    "region_ux",
    "region_ux_from_terms",
    "region_ux_minform",
    "region_vx",
    "region_vx_minform",
    "save_dist",
    "DEFAULT_COLORS",
    "region_svg",
    "SweepConfig",
    "SweepOutcome",
    "TimeSharingReport",
    "capacity_input",
    "coded_time_sharing_check",
    "sweep_uv",
    "sweep_ux",
    "sweep_vx",
    "Codebook",
    "DecodeOutcome",
    "SimulationError",
    "TrialRecord",
    "TrialResult",
    "decode_ml",
    "decode_ml_pair",
    "decode_typicality",
    "estimate_error",
    "generate_codebook",
    "is_typical",
    "Case3Breakdown",
    "CaseCheck",
    "InclusionCertificate",
    "StrictnessReport",
    "case3_breakdown",
    "classify_case",
    "inclusion_margin",
    "strictness_demo",
    "sum_rate_triangle",
    "u_only_dist",
    "v_only_dist",
    "verify_inclusion",
]
