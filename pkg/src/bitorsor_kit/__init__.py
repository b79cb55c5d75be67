"""Finite bitorsor calculus with equivariant classification and decomposition."""

from .bitorsors import (
    Bitorsor,
    BitorsorMorphism,
    compose,
    from_right_torsor,
    inverse,
    isom_bitorsor,
    pushforward,
    trivial_bitorsor,
)
from .devissage import (
    Decomposition,
    SplitExtension,
    decompose,
    decompose_with_lift,
    is_type_gamma,
    is_type_pi,
    th_ppal_membership,
    verify_decomposition,
)
from .equivariant import (
    PiBitorsor,
    PiGroup,
    PiMorphism,
    ThetaBitorsor,
    classify,
    compose_pi,
    from_theta,
    h1,
    inverse_pi,
    pi_isomorphism,
    to_theta,
)
from .errors import DomainError
from .formats import (
    ParseError,
    decomposition_from_json,
    decomposition_to_json,
    format_extension,
    format_group,
    format_registry,
    parse_extension,
    parse_group,
    parse_registry,
    resolve_group_spec,
)
from .groups import (
    FiniteGroup,
    GroupHom,
    Subgroup,
    cyclic,
    cyclic_power_action,
    dihedral,
    direct_product,
    enumerate_homs,
    make_group,
    semidirect_product,
    subgroup,
    symmetric,
)
from .local_model import BadParams, SurveyReport, TameParams, build_tame_quotient, survey
from .rclass import (
    ElementaryClassRegistry,
    fixed_point_closure,
    in_closure,
    requiv_related,
    validate_registry,
)

__version__ = "0.1.0"

__all__ = [
    "Bitorsor",
    "BitorsorMorphism",
    "compose",
    "from_right_torsor",
    "inverse",
    "isom_bitorsor",
    "pushforward",
    "trivial_bitorsor",
    "Decomposition",
    "SplitExtension",
    "decompose",
    "decompose_with_lift",
    "is_type_gamma",
    "is_type_pi",
    "th_ppal_membership",
    "verify_decomposition",
    "PiBitorsor",
    "PiGroup",
    "PiMorphism",
    "ThetaBitorsor",
    "classify",
    "compose_pi",
    "from_theta",
    "h1",
    "inverse_pi",
    "pi_isomorphism",
    "to_theta",
    "DomainError",
    "ParseError",
    "decomposition_from_json",
    "decomposition_to_json",
    "format_extension",
    "format_group",
    "format_registry",
    "parse_extension",
    "parse_group",
    "parse_registry",
    "resolve_group_spec",
    "FiniteGroup",
    "GroupHom",
    "Subgroup",
    "cyclic",
    "cyclic_power_action",
    "dihedral",
    "direct_product",
    "enumerate_homs",
    "make_group",
    "semidirect_product",
    "subgroup",
    "symmetric",
    "BadParams",
    "SurveyReport",
    "TameParams",
    "build_tame_quotient",
    "survey",
    "ElementaryClassRegistry",
    "fixed_point_closure",
    "in_closure",
    "requiv_related",
    "validate_registry",
]
