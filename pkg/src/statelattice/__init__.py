"""Lattice of quantum states on the convex body of density operators.

The atoms of this lattice are all states, pure and mixed alike; the
projector lattice of standard quantum logic embeds into it through the
faces of the state body, and bipartite systems connect to their parts
through a going-up tensor map and going-down partial-trace maps.
"""

from .operators import (
    DEFAULT_BUDGET,
    DEFAULT_TOL,
    DensityOp,
    HermOp,
    SpaceShape,
    Tolerances,
    expectation,
    herm_basis,
    hs_inner,
    hs_norm,
    is_density,
    is_pure,
    partial_trace,
    tensor,
)
from .subspaces import (
    HermSubspace,
    contains,
    intersect,
    orth_complement,
    same_subspace,
    span,
    subspace_distance,
    subspace_sum,
)
from .convex_geometry import (
    FaceCertificate,
    FacialReductionError,
    FeasibilityResult,
    OracleInconclusiveError,
    UndecidedFeasibilityError,
    brute_force_span,
    feasible_point,
    good_representative,
    minimal_face,
    sample_feasible,
)
from .lattice import (
    LatticeElement,
    ModularReport,
    atom,
    check_modular,
    element_from_densities,
    is_atom,
    join,
    leq,
    meet,
    neg,
    one_element,
    same_element,
    zero_element,
)
from .vn_lattice import (
    FaceComparisonReport,
    VNElement,
    compare_ops,
    face_embed,
    vn_join,
    vn_leq,
    vn_meet,
    vn_neg,
)
from .bipartite import (
    BipartiteContext,
    ImPsiReport,
    PsiSlotReport,
    SeparabilityVerdict,
    SublatticeResult,
    TauMorphismReport,
    TensorMembershipResult,
    convex_tensor_membership,
    generate_sublattice,
    im_psi_separability_report,
    is_separable,
    partial_transpose,
    psi,
    psi_fixed_slot_report,
    tau,
    tau_morphism_report,
    tau_pair,
)
from .harness import (
    CheckResult,
    Report,
    SuiteConfig,
    VolumeEstimate,
    improper_mixture_demo,
    mix64,
    random_density,
    random_element,
    random_entangled_pure,
    random_pure,
    run_suite,
    separable_volume,
)

__version__ = "0.1.0"
