"""qslice: exact-arithmetic engine for the type-A quiver/slice dictionary.

Verifies, at desk scale and with zero-tolerance rational arithmetic,
the explicit correspondence between framed type-A quiver representation
data (ADHM relations, stability, path-algebra invariants) and nilpotent
matrices in transverse-slice normal form (Jordan types, partial flags,
the recursive block embedding with its gradings and coefficients).
"""

from ._backend import BACKEND_NAME
from .adhm import (
    ADHMData,
    GLVElement,
    act,
    adhm_defect,
    check_admissible,
    check_stable_criterion,
    check_stable_definition,
    composite_delta,
    composite_gamma,
    gen_general,
    gen_glv,
    gen_lagrangian,
    gen_unstable,
    invariant_signature,
)
from .embedding import (
    CoeffTable,
    TildeData,
    act_tilde,
    base_sl2,
    check_embedding_equations,
    check_tilde_admissible,
    check_transversal,
    coefficient_tables,
    embed,
    embed_group,
    embed_inverse,
    filtration_check,
    slice_point,
    tilde_stability,
)
from .flags import FlagPair, PartialFlag, data_of_flag, flag_of_data, gen_flag_pair
from .linalg import (
    RationalMatrix,
    kernel_basis,
    rank,
    rank_factorize,
    rref,
    solve_affine,
)
from .nilpotent import (
    Partition,
    centralizer_dim,
    centralizer_dim_formula,
    dominance_leq,
    jordan_type,
    standard_nilpotent,
)
from .paths import (
    AdmissiblePath,
    AdmissiblePolynomial,
    BPath,
    eval_admissible,
    eval_bpath,
    eval_polynomial,
    generators_P,
    multiply,
    parse_path,
    theta_residual,
)
from .tilde import SL2Triple, TildeLayout, deg_grad, sl2_of_level, tilde_dims
from .weights import (
    DimData,
    a_of,
    cartan_matrix,
    dominant_form,
    lambda_of,
    quiver_dim,
    quiver_nonempty,
    slice_dim,
    slice_nonempty,
    v_of,
    x_type_partition,
)

__version__ = "0.1.0"
