"""Executable linear algebra of polarized Hodge structures, unipotent-cell
coordinates, Hodge bundle sections and splittings."""

from .cell import (
    AffineCoordinates,
    BlockScheme,
    UnipotentMatrix,
    affine_coordinates,
    assemble_blocks,
    block_lu,
    block_partition,
    filtration_from_unipotent,
    nplus_representative,
    transition_matrix,
)
from .core import (
    DEFAULT_TOL,
    AdaptedBasis,
    Decomposition,
    Filtration,
    HodgeFrame,
    PointClass,
    build_polarization,
    check_first_riemann,
    check_second_riemann,
    classify_point,
    conjugate_structure,
    decomposition_from_filtration,
    weil_operator,
)
from .errors import *  # noqa: F401,F403
from .families import (
    hk_nonhorizontal_point,
    hk_omega,
    hk_weight2_base,
    hk_weight2_frame,
    hk_weight2_point,
    weight1_base,
    weight1_frame,
    weight1_point,
)
from .paths import (
    PeriodPath,
    SampleGrid,
    holomorphicity_check,
    sample_grid,
    sample_path,
    transversality_check,
)
from .sections import (
    ConjugacyVerdict,
    conjugate_obstruction,
    expansion_check,
    period_component,
    project_to_base,
    projection,
    section_matrix,
    section_value,
    splitting_check,
)

__version__ = "0.1.0"
