"""Numerical abelian relations, rank and classification of planar webs."""

from .catalog import NamedWeb, family_limit_checks, identity_suite, make_named_web, quartic_roots, verify_relations
from .criterion import (
    QuarticFit,
    WebClass,
    check_eq1_eq2,
    classify,
    equivalence_moduli,
    fit_quartic_ode,
    max_rank_system_check,
)
from .estimators import QuarticODEFit, WebClassifier, WebRankEstimator
from .exceptions import (
    ConstantSlope,
    ConvergenceError,
    DomainError,
    NumericalPrecisionError,
    PoleError,
    StructuralError,
    TransversalityError,
    WebsmithError,
)
from .jets import Jet2, OperatorExpansion, Series, jet_add, jet_compose, jet_directional, jet_mul, operator_coefficients
from .rank import RankReport, RelationBasis, constraint_matrix, rank_estimate, relation_residual
from .special import EllipticContext, cn, context_from_k, context_from_tau, dn, jacobi, sn, theta
from .webs import (
    Foliation,
    Symmetry,
    Web,
    apply_symmetry,
    d8_elements,
    foliation_equal,
    formula_foliation,
    transversality_check,
    web_from_dict,
    web_to_dict,
)

__version__ = "0.1.0"
