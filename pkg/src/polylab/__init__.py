"""Eigenvalue-based multivariate polynomial rootfinding and its conditioning.

The package builds structured polynomial systems with known roots, solves
them through several eigenvalue reductions (multiplication matrices,
Macaulay resultant pencils, multiparameter operator determinants, and
closed-form univariate eliminations), and measures how the conditioning of
each intermediate eigenproblem compares to the conditioning of the roots
themselves.
"""

from .bench import (
    FIGURES,
    SweepRecord,
    SweepSpec,
    digits_of_accuracy,
    emit_csv,
    emit_svg,
    read_csv,
    run_sweep,
)
from .conditioning import (
    BasisSingular,
    ConditionReport,
    MultipleRoot,
    QFactorization,
    SingularJacobian,
    b0_matrix,
    kappa_eig,
    kappa_eig_macaulay_bound,
    kappa_eig_mep_formula,
    kappa_eig_ms_formula,
    kappa_root,
    kappa_uni,
    lagrange_interpolant,
    mep_root_vectors,
    mep_row_scaling,
    normal_form,
    q_factorization,
    theory_digits,
)
from .families import FAMILIES, FamilySpec, generate, true_root_error
from .macaulay import (
    MacaulayMatrix,
    MacaulayPencil,
    RankDeficientBasis,
    choose_basis,
    linear_poly,
    macaulay_hat,
    macaulay_pencil,
    smallest_singular_hat,
)
from .numkernel import (
    EigTriple,
    GenEigProblem,
    NullSpaceGapWarning,
    SingularPencil,
    block_operator_determinant,
    companion_matrix,
    companion_roots,
    generalized_eig,
    null_space,
    sigma_min,
)
from .polycore import (
    MonomialOrder,
    MultiPoly,
    PolySystem,
    UniPoly,
    bezout_count,
    jacobian,
    monomials_up_to,
    rho,
)
from .solvers import (
    EigenvectorDegenerate,
    MultiParamEig,
    NullityMismatch,
    RootReport,
    SingularDelta0,
    UnsupportedShape,
    build_ms_matrices,
    determinantal_representation_quadratic,
    hausdorff_distance,
    mep_from_system,
    newton_polish,
    operator_determinants,
    reduce_macaulay_pencil,
    solve_gb_elimination_example,
    solve_macaulay_resultant,
    solve_mep_operator_determinants,
    solve_normal_form,
    solve_rur_example,
)
from .verification import VerificationResult, run_all

__version__ = "0.1.0"

__all__ = [
    "FIGURES",
    "SweepRecord",
    "SweepSpec",
    "digits_of_accuracy",
    "emit_csv",
    "emit_svg",
    "read_csv",
    "run_sweep",
    "BasisSingular",
    "ConditionReport",
    "MultipleRoot",
    "QFactorization",
    "SingularJacobian",
    "b0_matrix",
    "kappa_eig",
    "kappa_eig_macaulay_bound",
    "kappa_eig_mep_formula",
    "kappa_eig_ms_formula",
    "kappa_root",
    "kappa_uni",
    "lagrange_interpolant",
    "mep_root_vectors",
    "mep_row_scaling",
    "normal_form",
    "q_factorization",
    "theory_digits",
    "FAMILIES",
    "FamilySpec",
    "generate",
    "true_root_error",
    "MacaulayMatrix",
    "MacaulayPencil",
    "RankDeficientBasis",
    "choose_basis",
    "linear_poly",
    "macaulay_hat",
    "macaulay_pencil",
    "smallest_singular_hat",
    "EigTriple",
    "GenEigProblem",
    "NullSpaceGapWarning",
    "SingularPencil",
    "block_operator_determinant",
    "companion_matrix",
    "companion_roots",
    "generalized_eig",
    "null_space",
    "sigma_min",
    "MonomialOrder",
    "MultiPoly",
    "PolySystem",
    "UniPoly",
    "bezout_count",
    "jacobian",
    "monomials_up_to",
    "rho",
    "EigenvectorDegenerate",
    "MultiParamEig",
    "NullityMismatch",
    "RootReport",
    "SingularDelta0",
    "UnsupportedShape",
    "build_ms_matrices",
    "determinantal_representation_quadratic",
    "hausdorff_distance",
    "mep_from_system",
    "newton_polish",
    "operator_determinants",
    "reduce_macaulay_pencil",
    "solve_gb_elimination_example",
    "solve_macaulay_resultant",
    "solve_mep_operator_determinants",
    "solve_normal_form",
    "solve_rur_example",
    "VerificationResult",
    "run_all",
]
