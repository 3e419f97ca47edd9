"""Toolkit for one-dimensional non-uniform cellular automata."""

from .configs import (
    Configuration,
    Cylinder,
    Pattern,
    SpaceTimeGrid,
    evolution,
    evolve_cell,
    evolve_window,
    shift_config,
    spacetime,
    step_config,
)
from .dynamics import (
    cylinder_invariance_check,
    divergence_search,
    product_pairing,
    temporal_recurrence_search,
)
from .errors import (
    ContractError,
    EnumerationCapExceeded,
    NucaError,
    ParseError,
    UnsupportedClosedForm,
)
from .finitemaps import (
    FiniteNucaMap,
    balance_audit,
    mutual_erasability_search,
    preimage_count,
    preimage_tally,
)
from .gallery import build_entry, run_pinned_facts
from .inverse import assemble_inverse, compose_check, local_inverse_candidate
from .rules import (
    BINARY,
    Alphabet,
    Interval,
    LocalRule,
    MirroredPyramid,
    RuleDistribution,
    RuleSet,
    TwoSided,
    Uniform,
    neighborhood_of,
    shift_distribution,
)

__version__ = "0.1.0"
