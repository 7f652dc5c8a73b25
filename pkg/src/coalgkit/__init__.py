"""Exact rational computations with coalgebras and their bicomodules."""

from .exactlin import (
    DimensionMismatch,
    Matrix,
    NotInImage,
    Rational,
    Subspace,
    cokernel,
    factor_through,
    kernel,
    kron,
    preimage,
    rank,
    subspace_equal,
    subspace_intersect,
    subspace_sum,
)
from .coalgebra import (
    Coalgebra,
    CoalgebraMap,
    NotBicomoduleMap,
    NotCoalgebraMap,
    NotSubcoalgebra,
    Subcoalgebra,
    comatrix,
    coradical,
    divided_power,
    dual_algebra,
    grouplike,
    iterated_delta,
    kernel_subcoalgebra,
    subcoalgebra_on,
    unit_coalgebra,
    validate_coalgebra,
    wedge,
    wedge_filtration,
    wedge_power,
)
from .bicomodule import (
    Bicomodule,
    BicomoduleMap,
    CoalgebraMismatch,
    cotensor,
    cotensor_of_maps,
    cotensor_power,
    induced_on_cokernel,
    induced_on_kernel,
    outer_bicomodule,
    regular_bicomodule,
    tensor_square_bicomodule,
    validate_bicomodule,
)
from .cohomology import (
    Cochain,
    HochschildExtensionData,
    NotACocycle,
    cohomology,
    differential,
    face,
    hochschild_extension,
    is_coseparable,
    is_formally_smooth,
    is_I_injective,
    trivialize_extension,
)
from .cotensor import (
    GradedCocycle,
    NicholsViolated,
    TruncatedCotensorCoalgebra,
    TruncationTooSmall,
    build_iterative,
    build_truncated,
    determination_check,
    graded_cocycle,
    graded_limit_check,
    universal_map,
    wedge_recovery_check,
)
from .quiver import (
    ParseError,
    PathBasis,
    Quiver,
    arrow_bicomodule,
    deconcatenation_oracle,
    oracle_compare,
    parse_quiver,
    vertex_coalgebra,
)

__version__ = "0.1.0"
