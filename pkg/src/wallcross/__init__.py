"""Exact arithmetic for spectra of charges crossing stability walls.

Charges live in a lattice mapping to the first homology of a reference
surface; their central charges are exact rational vectors in the plane.
The package builds the truncated positive cone, the associated filtered
algebra with its clockwise ray factorization, sign refinements, chain
and forest combinatorics, and the wall-detection engine that transports
a spectrum along a path of central charges.  No floating point is used
anywhere.
"""

from .algebra import AlgebraElement, BracketMode, PbwAlgebra, Spectrum
from .engine import (
    SpectrumJump,
    StabilityStructure,
    VariationPath,
    VariationReport,
    WallEvent,
    check_variation,
    detect_walls,
    transport_spectrum,
)
from .errors import (
    FirstTypeWallError,
    ReconstructionError,
    SecondTypeWallError,
    ValidationError,
    WallcrossError,
)
from .lattice import (
    CentralCharge,
    Charge,
    ChargeLattice,
    QuadraticForm,
    Sector,
    SurfaceModel,
    TruncationSet,
    charges_parallel,
    cone_enumerate,
    cross,
    phase_precedes,
    wall_first_type,
    wall_second_type,
)
from .multidisk import (
    ChainCombination,
    ChainVertex,
    DecoratedForest,
    NiceChain,
    crossing_rewrite,
    enumerate_forests,
    link,
    make_chain,
    multilink_forest,
    multilink_total,
)
from .refinement import (
    CohomologyAction,
    QuadraticRefinement,
    all_refinements,
    covariant_spectrum,
    to_twisted,
    twist_spectrum,
)
from .scenario import Scenario, format_scenario, parse_scenario

__all__ = [
    "AlgebraElement",
    "BracketMode",
    "CentralCharge",
    "ChainCombination",
    "ChainVertex",
    "Charge",
    "ChargeLattice",
    "CohomologyAction",
    "DecoratedForest",
    "FirstTypeWallError",
    "NiceChain",
    "PbwAlgebra",
    "QuadraticForm",
    "QuadraticRefinement",
    "ReconstructionError",
    "Scenario",
    "SecondTypeWallError",
    "Sector",
    "Spectrum",
    "SpectrumJump",
    "StabilityStructure",
    "SurfaceModel",
    "TruncationSet",
    "ValidationError",
    "VariationPath",
    "VariationReport",
    "WallEvent",
    "WallcrossError",
    "all_refinements",
    "charges_parallel",
    "check_variation",
    "cone_enumerate",
    "covariant_spectrum",
    "cross",
    "crossing_rewrite",
    "detect_walls",
    "enumerate_forests",
    "format_scenario",
    "link",
    "make_chain",
    "multilink_forest",
    "multilink_total",
    "parse_scenario",
    "phase_precedes",
    "to_twisted",
    "transport_spectrum",
    "twist_spectrum",
    "wall_first_type",
    "wall_second_type",
]

__version__ = "0.1.0"
