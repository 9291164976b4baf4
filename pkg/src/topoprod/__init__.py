"""Exact computation in fundamental groups of level-graded wedge-like spaces.

The package decides word equality in topologist products of free groups,
computes symbolic cardinal-sequence invariants with certified bijection
plans, and classifies finitely presented pointed-space models into the
horseshoe and tight-section regimes.
"""

from .affine import Affine
from .cardseq import (
    ALEPH_OMEGA,
    BijectionPlan,
    CardSeq,
    Cardinal,
    ConstantTail,
    Grouping,
    IncreasingAlephsTail,
    PeriodicTail,
    SeqVerdict,
    ZeroTail,
    aleph,
    audit_plan,
    card_sum,
    constant_seq,
    eventually_below,
    eventually_zero,
    fin,
    finite_seq,
    realize_bijection,
    regroup,
    seq_equiv,
    shift_tail,
    sums_dominated,
)
from .errors import (
    BudgetError,
    DeclarationMismatchError,
    Error,
    InputError,
    InvalidReindexingError,
    LevelMismatchError,
    NotApplicableError,
    ParseError,
    ProfileMismatchError,
    ValidationError,
)
from .freealg import (
    FreeWord,
    Letter,
    ProductNormalForm,
    cyclic_reduce,
    divisibility_spectrum,
    identity,
    invert,
    kth_root,
    multiply,
    normal_form,
    power,
    reduce_free,
    word_from_letters,
)
from .spacemodel import (
    Classification,
    Component,
    ConstantH,
    HorseshoeVerdict,
    HorseshoeWitness,
    IsoVerdict,
    NamedPoint,
    PairFamily,
    SpaceModel,
    UnboundedH,
    Violation,
    builtin_model,
    classify,
    detect_horseshoe,
    iso_test,
    point_levels,
    tight_section,
    validate,
)
from .topword import (
    ClassRule,
    CombinatorialLoop,
    FiniteBlock,
    FiniteLoopBlock,
    LoopClassRule,
    LoopRecord,
    OmegaBlock,
    OmegaLoopBlock,
    OmegaStarBlock,
    OmegaStarLoopBlock,
    TopWord,
    concat,
    eq_up_to,
    invert_word,
    phi_endo,
    project,
    reduce_loop,
    reindex_iso,
    semidecide_neq,
    tail_retract,
    z_profile,
)

__version__ = "0.1.0"
