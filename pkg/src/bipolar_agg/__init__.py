"""Bipolar argumentation frameworks and the aggregation of support relations."""
from .aggregation import (
    AggregationRule,
    CallableRule,
    CoalitionFamily,
    Dictatorship,
    Profile,
    Quota,
    SupportUniverse,
    aggregate,
    check_grounded,
    check_independent,
    check_neutral,
    check_unanimous,
    detect_dictator,
    extract_winning_coalitions,
    is_ultrafilter,
    majority,
    nomination,
    supporter_set,
    unanimity,
)
from .baf import (
    Baf,
    SemanticsKind,
    closure,
    credulously_accepted,
    defends,
    enumerate_extensions,
    has_secondary_attack,
    has_supported_attack,
    is_c_admissible,
    is_closed,
    is_conflict_free,
    is_d_admissible,
    is_extension,
    is_s_admissible,
    is_safe,
    is_stable,
    satisfies_essential_constraint,
    set_attacks,
    set_supports,
    support_reachable,
)
from .config import Limits
from .errors import DomainError, ParseError, ResourceError
from .preservation import (
    MetaKind,
    MetaWitness,
    PropertyKind,
    PropertySpec,
    check_preservation,
    evaluate_property,
    find_counterexample,
    search_meta_witness,
    verify_disjunctiveness_witness,
    verify_nonsimplicity_witness,
)

__version__ = "0.1.0"
