"""Finitely presented pointed-space models and their classification.

A model is a combinatorial proxy for a pointed space together with a nested
neighborhood basis X = U_0 >= U_1 >= ... at the basepoint.  It records the
cardinality of every annulus U_n \\ U_{n+1}, finitely many named points with
their annulus levels, a partition of the named points plus the basepoint
into path components, and schematic families of point pairs with declared
in-U_k connectivity.  Unnamed annulus mass is read as points that are each
their own path component, so a bare census already describes a totally path
disconnected space.

Classification is a dichotomy: either some family witnesses two sequences
converging to the basepoint that are joined by paths in the whole space but
by none inside a fixed U_k (a horseshoe), or every component dies at a
finite level and the model has a tight section whose level census is a
complete isomorphism invariant of the suspension's fundamental group.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from typing import Union

from .affine import Affine
from .cardseq import (
    CardSeq,
    SeqVerdict,
    constant_seq,
    fin,
    finite_seq,
    seq_equiv,
    shift_tail,
)
from .errors import InputError, NotApplicableError, ValidationError

BASEPOINT = "basepoint"
APPROACHES_BASE = "approachesBase"


@dataclass(frozen=True)
class NamedPoint:
    """A distinguished point lying in the annulus U_level \\ U_{level+1}."""

    id: str
    level: int


@dataclass(frozen=True)
class Component:
    """A declared path component: member point ids and its vanishing level.

    max_level is the least n with U_{n+1} disjoint from the component, or
    APPROACHES_BASE when no such n exists.  The latter is legal only for
    the component containing the basepoint.
    """

    id: str
    members: tuple[str, ...]
    max_level: Union[int, str]

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(self.members))


@dataclass(frozen=True)
class ConstantH:
    """Pairs are joined inside U_k but inside no smaller neighborhood."""

    k: int


@dataclass(frozen=True)
class UnboundedH:
    """Pairs are joined inside every U_k."""


@dataclass(frozen=True)
class PairFamily:
    """Schematic sequences (x_n), (y_n) converging to the basepoint.

    x_level and y_level give the annulus level of the nth pair; they must
    escape strictly so the sequences converge.  same_component declares a
    path from x_n to y_n somewhere in the space, and h says how deep into
    the neighborhood basis such paths survive.  component optionally names
    the path component carrying every point of the family; a label that
    matches no declared component asserts a shared but undeclared one.
    """

    x_level: Affine
    y_level: Affine
    same_component: bool
    h: Union[ConstantH, UnboundedH]
    component: Union[str, None] = None


@dataclass(frozen=True)
class SpaceModel:
    annuli: CardSeq
    points: tuple[NamedPoint, ...] = ()
    components: tuple[Component, ...] = ()
    pair_families: tuple[PairFamily, ...] = ()

    def __post_init__(self):
        if not isinstance(self.annuli, CardSeq):
            raise ValidationError("annuli must be a cardinal sequence")
        object.__setattr__(self, "points", tuple(self.points))
        object.__setattr__(self, "components", tuple(self.components))
        object.__setattr__(self, "pair_families", tuple(self.pair_families))


@dataclass(frozen=True)
class Violation:
    field: str
    rule: str
    message: str


@dataclass(frozen=True)
class HorseshoeWitness:
    """Normalized witness data for a horseshoe verdict.

    The sequences with the shifted level schemas live inside
    U_{neighborhood_index}; pairs are joined in the space but by no path in
    that neighborhood, distinct indices are never joined there, and the
    dichotomy tag records whether the x_n share one path component or lie
    in pairwise distinct ones.
    """

    family_index: int
    neighborhood_index: int
    x_level: Affine
    y_level: Affine
    dichotomy: str


@dataclass(frozen=True)
class HorseshoeVerdict:
    is_horseshoe: bool
    witness: Union[HorseshoeWitness, None] = None


@dataclass(frozen=True)
class Classification:
    kind: str
    group_note: str
    witness: Union[HorseshoeWitness, None] = None
    section: Union[tuple, None] = None
    invariant: Union[CardSeq, None] = None


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    left_invariant: CardSeq
    right_invariant: CardSeq
    evidence: SeqVerdict


HORSESHOE_NOTE = (
    "pi1 of the suspension contains an embedded copy of the fundamental "
    "group of the harmonic archipelago; it has a divisible element and is "
    "not a topologist product of free groups"
)
TPD_NOTE = (
    "pi1 of the suspension is the topologist product of the free groups "
    "F(lambda_n) over the invariant sequence lambda"
)


def _natural(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool) and x >= 0


def validate(m: SpaceModel) -> list:
    """Check every model invariant, returning violations as data."""

    out: list[Violation] = []
    seen_points: dict[str, int] = {}
    for p in m.points:
        if not isinstance(p.id, str) or not p.id:
            out.append(Violation("points", "pointId", "point ids must be nonempty strings"))
            continue
        if p.id == BASEPOINT:
            out.append(Violation("points", "pointId", "the basepoint is implicit and cannot be renamed"))
            continue
        if p.id in seen_points:
            out.append(Violation("points", "pointId", f"duplicate point id {p.id!r}"))
            continue
        if not _natural(p.level):
            out.append(Violation("points", "pointLevel", f"point {p.id!r} needs a natural level"))
            continue
        seen_points[p.id] = p.level

    named = Counter(seen_points.values())
    for level, count in sorted(named.items()):
        total = m.annuli.value(level)
        if total.is_finite and total.index < count:
            out.append(
                Violation(
                    "annuli",
                    "census",
                    f"annulus {level} holds {total.index} points but {count} are named",
                )
            )

    placed: dict[str, str] = {}
    base_component: Union[Component, None] = None
    seen_components: set[str] = set()
    for c in m.components:
        if not isinstance(c.id, str) or not c.id:
            out.append(Violation("components", "componentId", "component ids must be nonempty strings"))
            continue
        if c.id in seen_components:
            out.append(Violation("components", "componentId", f"duplicate component id {c.id!r}"))
            continue
        seen_components.add(c.id)
        if not c.members:
            out.append(Violation("components", "membership", f"component {c.id!r} has no members"))
        levels = []
        for member in c.members:
            if member in placed:
                out.append(
                    Violation(
                        "components",
                        "partition",
                        f"{member!r} appears in components {placed[member]!r} and {c.id!r}",
                    )
                )
                continue
            placed[member] = c.id
            if member == BASEPOINT:
                base_component = c
            elif member in seen_points:
                levels.append(seen_points[member])
            else:
                out.append(Violation("components", "membership", f"component {c.id!r} lists unknown point {member!r}"))
        if base_component is c:
            if c.max_level != APPROACHES_BASE:
                out.append(
                    Violation(
                        "components",
                        "maxLevel",
                        f"the basepoint component {c.id!r} must approach the base",
                    )
                )
            continue
        if c.max_level == APPROACHES_BASE:
            out.append(
                Violation(
                    "components",
                    "maxLevel",
                    f"component {c.id!r} approaches the base but does not contain the basepoint",
                )
            )
        elif not _natural(c.max_level):
            out.append(Violation("components", "maxLevel", f"component {c.id!r} needs a natural maxLevel"))
        elif levels and c.max_level != max(levels):
            out.append(
                Violation(
                    "components",
                    "maxLevel",
                    f"component {c.id!r} declares maxLevel {c.max_level} but its deepest member sits at {max(levels)}",
                )
            )

    if base_component is None:
        out.append(Violation("components", "partition", "no component contains the basepoint"))
    for pid in seen_points:
        if pid not in placed:
            out.append(Violation("components", "partition", f"named point {pid!r} belongs to no component"))

    for i, fam in enumerate(m.pair_families):
        tag = f"pairFamilies[{i}]"
        for label, schema in (("xLevel", fam.x_level), ("yLevel", fam.y_level)):
            if not isinstance(schema, Affine) or schema.a < 1 or schema.b < 0:
                out.append(
                    Violation(
                        "pairFamilies",
                        "levelSchema",
                        f"{tag}.{label} must be affine and strictly increasing from a natural number",
                    )
                )
        if isinstance(fam.h, ConstantH):
            if not _natural(fam.h.k):
                out.append(Violation("pairFamilies", "connectivity", f"{tag}.h needs a natural bound"))
        elif not isinstance(fam.h, UnboundedH):
            out.append(Violation("pairFamilies", "connectivity", f"{tag}.h must be constant or unbounded"))
        if fam.component is not None and not fam.same_component:
            out.append(
                Violation(
                    "pairFamilies",
                    "familyComponent",
                    f"{tag} names a shared component yet declares the pairs disconnected",
                )
            )
        if (
            fam.same_component
            and isinstance(fam.h, UnboundedH)
            and fam.component is not None
            and fam.component in seen_components
            and (base_component is None or fam.component != base_component.id)
        ):
            out.append(
                Violation(
                    "pairFamilies",
                    "contradiction",
                    f"{tag} joins its pairs arbitrarily close to the base, forcing a path to the "
                    f"basepoint, yet its points sit in component {fam.component!r}",
                )
            )
    return out


def _require_valid(m: SpaceModel) -> None:
    violations = validate(m)
    if violations:
        err = ValidationError(
            "invalid model: " + "; ".join(v.message for v in violations)
        )
        err.violations = tuple(violations)
        raise err


def detect_horseshoe(m: SpaceModel) -> HorseshoeVerdict:
    """Decide whether some family witnesses the horseshoe property.

    A family qualifies when its pairs are joined in the space but the
    joining paths die at a fixed depth k0: no path inside U_{k0+1} ever
    connects a pair.  The witness shifts both sequences so every point
    lies inside that neighborhood.
    """

    _require_valid(m)
    for i, fam in enumerate(m.pair_families):
        if not fam.same_component or not isinstance(fam.h, ConstantH):
            continue
        depth = fam.h.k + 1
        cut = max(fam.x_level.first_at_least(depth), fam.y_level.first_at_least(depth))
        dichotomy = "oneComponent" if fam.component is not None else "distinctComponents"
        witness = HorseshoeWitness(
            family_index=i,
            neighborhood_index=depth,
            x_level=fam.x_level.shifted(cut),
            y_level=fam.y_level.shifted(cut),
            dichotomy=dichotomy,
        )
        return HorseshoeVerdict(True, witness)
    return HorseshoeVerdict(False)


def _basepoint_component(m: SpaceModel) -> Component:
    for c in m.components:
        if BASEPOINT in c.members:
            return c
    raise ValidationError("no component contains the basepoint")


def _invariant_sequence(m: SpaceModel) -> CardSeq:
    """Level census of the tight section, one entry per component.

    Each named point is absorbed into its declared component, which counts
    once at its own maxLevel; every unnamed point in the annulus census is
    its own component and counts where it lies.  Infinite annuli absorb the
    finitely many adjustments.
    """

    named = Counter(p.level for p in m.points)
    comps = Counter(
        c.max_level for c in m.components if isinstance(c.max_level, int)
    )
    horizon = len(m.annuli.prefix)
    for level in (*named, *comps):
        horizon = max(horizon, level + 1)
    prefix = []
    for n in range(horizon):
        total = m.annuli.value(n)
        if total.is_finite:
            prefix.append(fin(total.index - named.get(n, 0) + comps.get(n, 0)))
        else:
            prefix.append(total)
    return CardSeq(tuple(prefix), shift_tail(m.annuli.tail, horizon - len(m.annuli.prefix)))


def tight_section(m: SpaceModel):
    """Pick one level per non-basepoint component and count the picks.

    Returns (section, invariant): the section lists every declared
    component with the level of its representative, and the invariant is
    the full census, schematic annulus mass included.
    """

    _require_valid(m)
    if detect_horseshoe(m).is_horseshoe:
        raise NotApplicableError("a horseshoe model admits no tight section")
    base = _basepoint_component(m)
    section = tuple(
        (c.id, c.max_level) for c in m.components if c.id != base.id
    )
    return section, _invariant_sequence(m)


def classify(m: SpaceModel) -> Classification:
    verdict = detect_horseshoe(m)
    if verdict.is_horseshoe:
        return Classification("horseshoe", HORSESHOE_NOTE, witness=verdict.witness)
    section, invariant = tight_section(m)
    return Classification("tpd", TPD_NOTE, section=section, invariant=invariant)


def iso_test(a: SpaceModel, b: SpaceModel) -> IsoVerdict:
    """Compare the invariant sequences of two tight-sectioned models."""

    left, right = classify(a), classify(b)
    if left.kind == "horseshoe" or right.kind == "horseshoe":
        raise NotApplicableError(
            "the isomorphism test needs tight sections on both sides"
        )
    evidence = seq_equiv(left.invariant, right.invariant)
    return IsoVerdict(evidence.equivalent, left.invariant, right.invariant, evidence)


def point_levels(m: SpaceModel) -> dict:
    return {p.id: p.level for p in m.points}


def _base_only() -> tuple:
    return (Component("base", (BASEPOINT,), APPROACHES_BASE),)


_BUILTIN = re.compile(r"^([A-Za-z][A-Za-z0-9]*)(?:\((.*)\))?$")


def builtin_model(name: str) -> SpaceModel:
    """Look up a named example model, parameterized ones included.

    Plain names: omegaPlusOne, doubledOmega, sineCurve.  Parameterized:
    discrete(k) with k >= 1 points, and bouquetSeed(n0,n1,...) with an
    explicit finite census per level.
    """

    match = _BUILTIN.match(name.strip()) if isinstance(name, str) else None
    if match is None:
        raise InputError(f"malformed model name {name!r}")
    head, raw = match.group(1), match.group(2)
    args: list[int] = []
    if raw is not None:
        for chunk in raw.split(","):
            chunk = chunk.strip()
            if not re.fullmatch(r"\d+", chunk or ""):
                raise InputError(f"model arguments must be natural numbers, got {raw!r}")
            args.append(int(chunk))

    if head == "omegaPlusOne":
        _expect_args(head, args, 0)
        return SpaceModel(constant_seq(fin(1)), (), _base_only(), ())
    if head == "doubledOmega":
        _expect_args(head, args, 0)
        return SpaceModel(constant_seq(fin(2)), (), _base_only(), ())
    if head == "sineCurve":
        _expect_args(head, args, 0)
        family = PairFamily(
            x_level=Affine(1, 0),
            y_level=Affine(1, 1),
            same_component=True,
            h=ConstantH(0),
            component="sine-arc",
        )
        return SpaceModel(constant_seq(fin(2)), (), _base_only(), (family,))
    if head == "discrete":
        _expect_args(head, args, 1)
        k = args[0]
        if k < 1:
            raise InputError("discrete(k) needs k >= 1")
        points = tuple(NamedPoint(f"p{i}", 0) for i in range(1, k))
        comps = _base_only() + tuple(
            Component(f"c{i}", (f"p{i}",), 0) for i in range(1, k)
        )
        return SpaceModel(finite_seq(k - 1), points, comps, ())
    if head == "bouquetSeed":
        if not args:
            raise InputError("bouquetSeed needs at least one census entry")
        return SpaceModel(finite_seq(*args), (), _base_only(), ())
    raise InputError(f"unknown model name {head!r}")


def _expect_args(head: str, args: list, count: int) -> None:
    if len(args) != count:
        raise InputError(f"{head} takes {count} argument(s), got {len(args)}")
