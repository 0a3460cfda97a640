"""Constrained unitary representation varieties at desk scale.

Representations of finitely presented groups into U(N) with peripheral
conjugacy-class constraints: constraint solving, relative first cohomology,
cup-product obstructions, and order-by-order jet lifting over truncated
polynomial rings.
"""

from .presentation import (
    ConjugacyClassSpec,
    ParseError,
    Presentation,
    Word,
    normalize_word,
    parse_presentation,
    serialize_presentation,
)
from .unitary import (
    BranchCutError,
    adjoint_action,
    class_of,
    class_residual,
    diagonal_model,
    exponential,
    haar_sample,
    inner_product,
    principal_log,
)
from .repspace import (
    NoConvergenceError,
    NotFoundError,
    Representation,
    Residuals,
    commutant_dimension,
    conjugate,
    constraint_residual,
    evaluate_word,
    find_representation,
    refine,
    rep_from_json,
    rep_to_json,
)
from .cohomology import (
    Cochain1,
    Cochain2,
    CohomologyBasis,
    ConeComplex,
    Dims,
    IllConditionedError,
    NotACocycleError,
    ObstructionClass,
    PairingTensor,
    assemble_complex,
    coboundary,
    cocycle_transport,
    h1_basis,
    h_dims,
    obstruction,
    pairing_tensor,
)
from .jets import (
    ConeProbeReport,
    JetRepresentation,
    LiftOptions,
    LiftReport,
    gauge_transform,
    jet_word,
    lift,
    probe_cone,
)

__version__ = "0.1.0"
