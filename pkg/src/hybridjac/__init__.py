"""Exact divisor theory on metrized complexes of Riemann surfaces.

Metric graphs with rational edge lengths, tropical and hybrid Jacobians,
Abel-Jacobi maps, and principality decisions computed two independent ways —
everything in exact rational arithmetic.
"""

from .errors import (
    AmbiguousMembership,
    BoundsInfeasible,
    HybridJacError,
    InputError,
    InternalDisagreement,
    RankDeficient,
)
from .graphs import (
    Edge,
    GraphPlace,
    MetricGraph,
    build_graph,
    cycle_basis,
    refine,
    vertex_place,
)
from .tropical import (
    ChipFiringMove,
    PLFunction,
    PeriodData,
    TropicalDivisor,
    aj_tropical,
    decompose_chip_firing,
    divisor_of_pl,
    is_principal_tropical,
    period_matrix,
    pl_clamp,
    pl_combine,
    pl_constant,
    pl_from_samples,
)
from .surfaces import (
    SurfaceDivisor,
    SurfacePointRef,
    VertexSurface,
    aj_surface,
    genus_zero_surface,
    reduce_mod_lattice,
)
from .complexes import (
    HybridDivisor,
    HybridFunction,
    HybridPlace,
    MCRS,
    build_mcrs,
    divisor_of_hybrid,
    gamma_part,
    marked_point,
    refine_complex,
    surface_point,
)
from .jacobian import (
    HybridCoordinates,
    HybridLattice,
    HybridVerdict,
    aj_hybrid,
    aj_preimage,
    homology_rank,
    hybrid_lattice,
    is_principal_hybrid,
    lift_divisor,
)
from .checks import InstanceSeed, SuiteResult, random_instance, run_property_suite
from .cli import run_cli

__all__ = [
    "AmbiguousMembership",
    "BoundsInfeasible",
    "ChipFiringMove",
    "Edge",
    "GraphPlace",
    "HybridCoordinates",
    "HybridDivisor",
    "HybridFunction",
    "HybridJacError",
    "HybridLattice",
    "HybridPlace",
    "HybridVerdict",
    "InputError",
    "InstanceSeed",
    "InternalDisagreement",
    "MCRS",
    "MetricGraph",
    "PLFunction",
    "PeriodData",
    "RankDeficient",
    "SuiteResult",
    "SurfaceDivisor",
    "SurfacePointRef",
    "TropicalDivisor",
    "VertexSurface",
    "aj_hybrid",
    "aj_preimage",
    "aj_surface",
    "aj_tropical",
    "build_graph",
    "build_mcrs",
    "cycle_basis",
    "decompose_chip_firing",
    "divisor_of_hybrid",
    "divisor_of_pl",
    "gamma_part",
    "genus_zero_surface",
    "homology_rank",
    "hybrid_lattice",
    "is_principal_hybrid",
    "is_principal_tropical",
    "lift_divisor",
    "marked_point",
    "period_matrix",
    "pl_clamp",
    "pl_combine",
    "pl_constant",
    "pl_from_samples",
    "random_instance",
    "reduce_mod_lattice",
    "refine",
    "refine_complex",
    "run_cli",
    "run_property_suite",
    "surface_point",
    "vertex_place",
]
