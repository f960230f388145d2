"""Combinatorial ad theories: ball complexes, the ad axioms, the chain-complex
and symmetric Poincare theories, bordism, cohomology and Quinn spectra."""

from .ad_framework import (
    AdCTheory,
    AdError,
    AdTheory,
    PreAd,
    T_group,
    adC_theory,
    bordism_add,
    bordism_group,
    check_axioms,
    connecting,
    five_term_exactness,
    integer_ring_theory,
    kan_extend,
)
from .chain_algebra import (
    GradedChainMap,
    HomologyGroup,
    IntegerChainComplex,
    cellular_chains,
    diagonal_W,
    extended_aw,
    hom_dual,
    mapping_cone,
    smith_homology,
)
from .complex_core import (
    BallComplex,
    barycentric_subdivision,
    boundary_simplex,
    horn,
    interval,
    model_M,
    model_M_prime,
    point,
    product,
    simplex,
)
from .quinn_spectra import (
    QuinnSpaceP,
    TruncatedSemisimplicialSet,
    box_product,
    homotopy_group,
    kan_suspension,
    loops,
    sigma_action,
    suspend_R,
)
from .symmetric_ads import (
    SymmetricComplex,
    SymmetricTheory,
    glue_symmetric,
    is_symmetric_ad,
    sig_of,
    signature,
    tensor_ads,
)

__version__ = "0.1.0"
