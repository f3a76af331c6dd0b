"""Fourier analysis on concrete compact groups and Pego-type precompactness
diagnostics: operator-valued transforms, Schatten / summed dual norms,
Hausdorff-Young checks, uniform-decay and equicontinuity profiles, verdicts,
and verified epsilon-nets."""

from .groups import (
    GroupDescriptor,
    GroupMismatchError,
    GroupPoint,
    NeighborhoodSpec,
    QuadratureRule,
    ResolutionError,
    cyclic,
    dihedral,
    distance,
    enumerate_elements,
    haar_quadrature,
    identity,
    inverse,
    multiply,
    parse_group,
    point,
    product,
    sample_ball,
    su2,
    torus,
)
from .irreps import (
    DualSubset,
    IrrepLabel,
    basis_twist,
    character,
    enumerate_dual,
    irrep_matrix,
    irrep_stack,
    parse_label,
    shell_subset,
    trivial_label,
)
from .fourier import (
    FourierCoefficients,
    SampledFunction,
    constant_function,
    convolve,
    dirac_net_element,
    evaluate_at,
    forward,
    forward_batch,
    forward_to_cutoff,
    inverse as inverse_transform,
    matrix_entry_function,
    random_band_limited_function,
    safe_band,
    sample,
    translate,
    translate_spectral,
)
from .norms import (
    ExponentPair,
    HausdorffYoungCheck,
    NormReport,
    hausdorff_young_check,
    lp_function_norm,
    lp_oplus_norm,
    plancherel_residual,
    plancherel_residual_report,
    schatten_norm,
)
from .compactness import (
    BoundednessReport,
    CoherenceError,
    ContinuityProfile,
    DecayProfile,
    DualFiltration,
    EpsilonNet,
    FamilySpec,
    Lemma31Check,
    Lemma32Check,
    NotPrecompactError,
    PegoVerdict,
    boundedness,
    epsilon_net,
    equicontinuity_profile,
    lemma31_bound_check,
    lemma32_bound_check,
    pego_verdict,
    tail_decay_profile,
)
from .families import builtin_family

__version__ = "0.1.0"
