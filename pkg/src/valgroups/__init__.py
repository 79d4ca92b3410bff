"""Finite valued Abelian groups: exact values, extensions, amalgamation, free groups and Fraisse-style chains."""

from .amalgam import *  # noqa: F401,F403
from .errors import (
    AdmissibilityError,
    AxiomViolation,
    BudgetError,
    InvalidSubgroupError,
    MalformedElementError,
    PostconditionError,
    PreconditionError,
    SchemaError,
    ValuedGroupError,
)
from .extension import *  # noqa: F401,F403
from .fraisse import *  # noqa: F401,F403
from .free import *  # noqa: F401,F403
from .groups import (
    FiniteAbelianGroup,
    GroupHom,
    Subgroup,
    all_subgroups,
    automorphisms,
    count_homs,
    enumerate_homs,
    quotient,
    smith_normal_form,
    subgroup_from_elements,
    subgroup_generated,
)
from .pv import *  # noqa: F401,F403
from .rational import INF, format_rational, parse_rational
from .values import *  # noqa: F401,F403

__version__ = "0.1.0"
