"""Exact verification of generalized Haar measures at desk scale."""

from .covering import (
    CoveringProblem,
    CoveringSolution,
    covering_number,
    existence_via_covering,
    mu_u,
)
from .groups import (
    BorelAtoms,
    FiniteGroup,
    FiniteTopGroup,
    QuotientData,
    borel_atoms,
    coset_topology,
    cyclic,
    dihedral,
    direct_product,
    group_topologies,
    identity_closure,
    product_group,
    quaternion8,
    quotient,
    symmetric3,
    trivial_group,
    validate_top_group,
)
from .measure import (
    FiniteMeasure,
    HaarReport,
    canonical_haar,
    fubini_check,
    haar_solution_space,
    integrate,
    invert_measure,
    is_haar,
    positivity_report,
    pullback,
    pushforward,
    riesz_check,
)
from .plane import (
    BkCertificate,
    CylinderSet,
    Interval,
    IntervalUnion,
    counterexample_bk,
    haar_v,
    regularity_gap,
    translate_v,
    verify_bk_certificate,
)
from .topology import (
    FiniteSpace,
    PointFunction,
    SeparationFlags,
    closed_compact_sandwich,
    enumerate_topologies,
    separate,
    split_compact,
    urysohn_finite,
)

__version__ = "0.1.0"
