"""dynbrace: enumeration and verification of braided structures on quivers
built from regular subsets of the automorphism-extended group of a finite
group, with the transport machinery that turns connected braided quivers back
into dynamical data."""

from .errors import InputError, ResourceCapError
from .groups import (
    Automorphism,
    FiniteGroup,
    automorphism_group,
    build_group,
    is_abelian,
)
from .holomorph import (
    DEFAULT_CAP,
    HolElement,
    RegularSubset,
    hol_inv,
    hol_mul,
    orbit_closure,
    translate,
)
from .quivers import (
    ComponentReport,
    LabelledQuiver,
    completeness_degree,
    connected_components,
    export_dot,
    is_homogeneous,
    quiver_of_dynamical_set,
)
from .structures import (
    Check,
    DynamicalSkewBrace,
    QuiverBraiding,
    Report,
    SkewBracoid,
    braiding_of_qtsb,
    dsb_from_subgroup_family,
    semiloopoid_of_dsb,
    verify_bracoid,
    verify_braiding,
    verify_dsb,
)
from .enumeration import (
    EnumerationConfig,
    EnumerationResult,
    InvariantTable,
    enumerate_full,
    enumerate_unital,
    initial_counts,
    invariants,
    partition_profile,
)
from .parallelise import (
    ParallelLabelling,
    TernaryHeap,
    braiding_from_heap,
    group_from_pointed_heap,
    parallelise,
    schurian_transversal,
    ternary_of_braiding,
    verify_heap,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
