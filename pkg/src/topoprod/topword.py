"""Words over block-structured countable orders and their finite projections.

A TopWord denotes an infinite word in a level-graded product of free groups:
its domain is a finite concatenation of blocks, each either an explicit
finite letter run, an omega block (order type of the naturals), or an
omega-star block (the mirror image).  Infinite blocks are schematic: position
k belongs to residue class k mod D, and within each class the letter's level,
generator, and exponent are affine in the step k div D.  Levels must strictly
escape (affine slope >= 1), which makes every level-N projection a finite,
exactly computable word and gives each word its defining per-level
finiteness.

Two words are the same group element when all projections agree; only the
bounded tests eq_up_to and semidecide_neq are offered, never full equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Mapping, Union

from .affine import Affine
from .cardseq import CardSeq, ConstantTail, PeriodicTail, ZeroTail, fin
from .errors import (
    BudgetError,
    InputError,
    InvalidReindexingError,
    ProfileMismatchError,
    ValidationError,
)
from .freealg import (
    Gen,
    Letter,
    ProductNormalForm,
    check_letter,
    identity,
    multiply,
    word_from_letters,
)

EXPANSION_BUDGET = 10**6


def z_profile() -> CardSeq:
    """The all-integers profile: one generator at every level."""
    return CardSeq((), ConstantTail(fin(1)))


@dataclass(frozen=True)
class ClassRule:
    """Letters of one residue class of an infinite block, affine in the step."""

    level: Affine
    gen: Union[Affine, str]
    exp: Affine

    def __post_init__(self):
        if self.level.a < 1:
            raise ValidationError("class levels must strictly escape (slope >= 1)")
        if self.level.b < 0:
            raise ValidationError("class levels must start at a natural number")
        if isinstance(self.gen, Affine):
            if self.gen.a < 0 or self.gen.b < 0:
                raise ValidationError("generator schema must stay natural")
        elif not (isinstance(self.gen, str) and self.gen):
            raise ValidationError("generator schema must be affine or a token")
        if self.exp.hits_zero():
            raise ValidationError("exponent schema vanishes at some step")

    def letter(self, j: int) -> Letter:
        gen: Gen = self.gen if isinstance(self.gen, str) else self.gen(j)
        return Letter(self.level(j), gen, self.exp(j))

    def shifted(self, delta: int) -> "ClassRule":
        gen = self.gen if isinstance(self.gen, str) else self.gen.shifted(delta)
        return ClassRule(self.level.shifted(delta), gen, self.exp.shifted(delta))


@dataclass(frozen=True)
class FiniteBlock:
    letters: tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))


@dataclass(frozen=True)
class OmegaBlock:
    """Positions 0, 1, 2, ... ascending; class of position k is k mod D."""

    classes: tuple[ClassRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValidationError("infinite block needs at least one class rule")

    def letter_at(self, k: int) -> Letter:
        d = len(self.classes)
        return self.classes[k % d].letter(k // d)

    def bound(self, n: int) -> int:
        """Positions >= bound(n) all have level > n."""
        d = len(self.classes)
        return 1 + max(
            rho + d * rule.level.first_at_least(n + 1)
            for rho, rule in enumerate(self.classes)
        )


@dataclass(frozen=True)
class OmegaStarBlock:
    """Mirror image: positions ... 2, 1, 0 with position 0 read last."""

    classes: tuple[ClassRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValidationError("infinite block needs at least one class rule")

    def letter_at(self, k: int) -> Letter:
        d = len(self.classes)
        return self.classes[k % d].letter(k // d)

    def bound(self, n: int) -> int:
        d = len(self.classes)
        return 1 + max(
            rho + d * rule.level.first_at_least(n + 1)
            for rho, rule in enumerate(self.classes)
        )


Block = Union[FiniteBlock, OmegaBlock, OmegaStarBlock]

_CLASS_SAMPLE_STEPS = 48


def _check_class_against_profile(profile: CardSeq, rule: ClassRule) -> None:
    for j in range(_CLASS_SAMPLE_STEPS):
        check_letter(profile, rule.letter(j))
    # beyond sampling, compare against the ranks the class hits in the tail
    tail = profile.tail
    if isinstance(tail, ZeroTail):
        raise ValidationError("infinite block escapes into levels of rank 0")
    if isinstance(tail, (ConstantTail, PeriodicTail)):
        members = (tail.constant,) if isinstance(tail, ConstantTail) else tail.values
        finite_ranks = [v.index for v in members if v.is_finite]
        if not finite_ranks:
            return
        if isinstance(rule.gen, str):
            raise ValidationError("symbolic generator at levels of finite rank")
        if rule.gen.a > 0:
            raise ValidationError("generator schema outgrows finite level ranks")
        if rule.gen.b >= min(finite_ranks) and _hits_finite_rank(
            profile, rule, rule.gen.b
        ):
            raise ValidationError("generator schema exceeds a finite level rank")


def _hits_finite_rank(profile: CardSeq, rule: ClassRule, gen: int) -> bool:
    if not isinstance(profile.tail, PeriodicTail):
        return True
    q = len(profile.tail.values)
    p = len(profile.prefix)
    start = rule.level.first_at_least(p)
    for j in range(start, start + q):
        rank = profile.value(rule.level(j))
        if rank.is_finite and gen >= rank.index:
            return True
    return False


@dataclass(frozen=True)
class TopWord:
    blocks: tuple[Block, ...]
    profile: CardSeq

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(self.blocks))
        for block in self.blocks:
            if isinstance(block, FiniteBlock):
                for letter in block.letters:
                    check_letter(self.profile, letter)
            else:
                for rule in block.classes:
                    _check_class_against_profile(self.profile, rule)


def empty_word(profile: CardSeq | None = None) -> TopWord:
    return TopWord((), profile if profile is not None else z_profile())


def _block_letters_upto(block: Block, n: int) -> Iterator[Letter]:
    if isinstance(block, FiniteBlock):
        for letter in block.letters:
            if letter.level <= n:
                yield letter
        return
    ks = range(block.bound(n))
    if isinstance(block, OmegaStarBlock):
        ks = reversed(ks)
    for k in ks:
        letter = block.letter_at(k)
        if letter.level <= n:
            yield letter


def project(w: TopWord, n: int) -> ProductNormalForm:
    """The level-n projection: all letters of level <= n, in domain order."""
    if n < 0:
        raise InputError("projection level must be a natural number")
    letters = itertools.chain.from_iterable(
        _block_letters_upto(block, n) for block in w.blocks
    )
    return word_from_letters(letters, level_bound=n, profile=w.profile)


def _retract_infinite(block: OmegaBlock | OmegaStarBlock, n: int):
    d = len(block.classes)
    cuts = [rule.level.first_at_least(n + 1) for rule in block.classes]
    if all(c == 0 for c in cuts):
        return None, block
    b = 1 + max(rho + d * cut for rho, cut in enumerate(cuts))
    stub = tuple(
        block.letter_at(k) for k in range(b) if block.letter_at(k).level > n
    )
    shifted = tuple(
        block.classes[(rho + b) % d].shifted((rho + b) // d) for rho in range(d)
    )
    return stub, type(block)(shifted)


def tail_retract(w: TopWord, n: int) -> TopWord:
    """Delete every letter of level <= n; fixes words supported above n."""
    out: list[Block] = []
    for block in w.blocks:
        if isinstance(block, FiniteBlock):
            kept = tuple(l for l in block.letters if l.level > n)
            if kept:
                out.append(FiniteBlock(kept))
            continue
        stub, rest = _retract_infinite(block, n)
        if stub is None:
            out.append(rest)
        elif isinstance(block, OmegaBlock):
            if stub:
                out.append(FiniteBlock(stub))
            out.append(rest)
        else:
            out.append(rest)
            if stub:
                out.append(FiniteBlock(tuple(reversed(stub))))
    return TopWord(tuple(out), w.profile)


def concat(u: TopWord, v: TopWord) -> TopWord:
    if u.profile != v.profile:
        raise ProfileMismatchError("cannot concatenate words over different profiles")
    return TopWord((*u.blocks, *v.blocks), u.profile)


def _negate(schema: Affine) -> Affine:
    return Affine(-schema.a, -schema.b)


def invert_word(w: TopWord) -> TopWord:
    out: list[Block] = []
    for block in reversed(w.blocks):
        if isinstance(block, FiniteBlock):
            out.append(
                FiniteBlock(tuple(l.inverse() for l in reversed(block.letters)))
            )
            continue
        flipped = tuple(
            ClassRule(rule.level, rule.gen, _negate(rule.exp))
            for rule in block.classes
        )
        kind = OmegaStarBlock if isinstance(block, OmegaBlock) else OmegaBlock
        out.append(kind(flipped))
    return TopWord(tuple(out), w.profile)


def eq_up_to(u: TopWord, v: TopWord, n: int) -> bool:
    """Whether all projections up to level n agree."""
    if u.profile != v.profile:
        raise ProfileMismatchError("cannot compare words over different profiles")
    return project(u, n) == project(v, n)


def semidecide_neq(u: TopWord, v: TopWord, n_max: int = 32) -> int | None:
    """Smallest distinguishing projection level <= n_max, or None if not found.

    None is not a proof of equality, only of agreement up to n_max.
    """
    for n in range(n_max + 1):
        if project(u, n) != project(v, n):
            return n
    return None


# ---------------------------------------------------------------------------
# the doubling endomorphism


def _require_z_profile(w: TopWord) -> None:
    prof = w.profile
    one = fin(1)
    ok = all(v == one for v in prof.prefix)
    if isinstance(prof.tail, ConstantTail):
        ok = ok and prof.tail.constant == one
    elif isinstance(prof.tail, PeriodicTail):
        ok = ok and all(v == one for v in prof.tail.values)
    else:
        ok = False
    if not ok:
        raise InputError("operation requires the rank-one (all integers) profile")


def _phi_finite(letters: tuple[Letter, ...]) -> tuple[Letter, ...]:
    out: list[Letter] = []
    total = sum(abs(l.exp) for l in letters)
    if 2 * total > EXPANSION_BUDGET:
        raise BudgetError(f"image needs {2 * total} letters, budget {EXPANSION_BUDGET}")
    for letter in letters:
        n = letter.level
        if letter.exp > 0:
            pair = (Letter(2 * n, 0, 1), Letter(2 * n + 1, 0, -1))
        else:
            pair = (Letter(2 * n + 1, 0, 1), Letter(2 * n, 0, -1))
        out.extend(pair * abs(letter.exp))
    return tuple(out)


def _phi_class_expansion(rule: ClassRule) -> list[tuple[Affine, int]]:
    """(level schema, exponent) per output letter of one source position."""
    if rule.exp.a != 0:
        raise InputError(
            "the doubling map needs constant exponents on infinite blocks"
        )
    e = rule.exp.b
    lo = Affine(2 * rule.level.a, 2 * rule.level.b)
    hi = Affine(2 * rule.level.a, 2 * rule.level.b + 1)
    if e > 0:
        pattern = [(lo, 1), (hi, -1)]
    else:
        pattern = [(hi, 1), (lo, -1)]
    return pattern * abs(e)


def _phi_infinite(block: OmegaBlock | OmegaStarBlock) -> Block:
    expansions = [_phi_class_expansion(rule) for rule in block.classes]
    mirrored = isinstance(block, OmegaStarBlock)
    out_classes: list[ClassRule] = []
    for rho, expansion in enumerate(expansions):
        ordered = list(reversed(expansion)) if mirrored else expansion
        for level, exp in ordered:
            out_classes.append(ClassRule(level, Affine(0, 0), Affine(0, exp)))
    return type(block)(tuple(out_classes))


def phi_endo(w: TopWord) -> TopWord:
    """The injective endomorphism a_n^e -> (a_2n a_2n+1^-1)^e, letterwise."""
    _require_z_profile(w)
    out: list[Block] = []
    for block in w.blocks:
        if isinstance(block, FiniteBlock):
            expanded = _phi_finite(block.letters)
            if expanded:
                out.append(FiniteBlock(expanded))
        else:
            out.append(_phi_infinite(block))
    return TopWord(tuple(out), w.profile)


# ---------------------------------------------------------------------------
# the reindexing isomorphism


class _Enumeration:
    """The lexicographic enumeration of the disjoint union of finite ranks."""

    def __init__(self, target: CardSeq):
        if not all(v.is_finite for v in target.prefix):
            raise InvalidReindexingError("target ranks must all be finite")
        tail = target.tail
        if isinstance(tail, ConstantTail):
            members = (tail.constant,)
        elif isinstance(tail, PeriodicTail):
            members = tail.values
        else:
            raise InvalidReindexingError(
                "target tail must repeat finitely many finite ranks"
            )
        if not all(v.is_finite for v in members):
            raise InvalidReindexingError("target ranks must all be finite")
        period_values = [v.index for v in members]
        if sum(period_values) == 0:
            raise InvalidReindexingError("target ranks are eventually zero")
        self.target = target
        self.prefix = [v.index for v in target.prefix]
        self.prefix_total = sum(self.prefix)
        self.period = period_values
        self.period_total = sum(period_values)
        self.cums = [0]
        for v in period_values:
            self.cums.append(self.cums[-1] + v)

    def locate(self, m: int) -> tuple[int, int]:
        """(level, gen) of the m-th generator overall."""
        if m < self.prefix_total:
            for level, count in enumerate(self.prefix):
                if m < count:
                    return level, m
                m -= count
        u = m - self.prefix_total
        t, o = divmod(u, self.period_total)
        i = max(idx for idx in range(len(self.period)) if self.cums[idx] <= o)
        level = len(self.prefix) + t * len(self.period) + i
        return level, o - self.cums[i]

    def map_letter(self, letter: Letter) -> Letter:
        level, gen = self.locate(letter.level)
        return Letter(level, gen, letter.exp)

    def map_class(self, rule: ClassRule) -> tuple[list[Letter], list[ClassRule]]:
        """Image of one class with exponents carried: (front stub, refined rules).

        The stub covers steps whose source index still lands in the target
        prefix; past it, the class splits into lcm-many residue subclasses on
        which the enumerated level is affine and the generator constant.
        """
        alpha, beta = rule.level.a, rule.level.b
        j_star = rule.level.first_at_least(self.prefix_total)
        stub = [self.map_letter(rule.letter(j)) for j in range(j_star)]
        r_total = self.period_total
        g = _gcd(alpha, r_total)
        span = r_total // g
        refined: list[ClassRule] = []
        for r in range(span):
            m0 = alpha * (j_star + r) + beta
            o = (m0 - self.prefix_total) % r_total
            t0 = (m0 - self.prefix_total - o) // r_total
            i = max(
                idx for idx in range(len(self.period)) if self.cums[idx] <= o
            )
            level = Affine(
                len(self.period) * (alpha * span // r_total),
                len(self.prefix) + len(self.period) * t0 + i,
            )
            exp = Affine(
                rule.exp.a * span, rule.exp.a * (j_star + r) + rule.exp.b
            )
            refined.append(ClassRule(level, Affine(0, o - self.cums[i]), exp))
        return stub, refined


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _reindex_infinite(block: OmegaBlock | OmegaStarBlock, enum: _Enumeration):
    d = len(block.classes)
    cuts = [rule.level.first_at_least(enum.prefix_total) for rule in block.classes]
    j_star = max(cuts)
    b = d * j_star
    stub = [enum.map_letter(block.letter_at(k)) for k in range(b)]
    shifted = [rule.shifted(j_star) for rule in block.classes]
    spans = []
    refined_per_class = []
    for rule in shifted:
        _, refined = enum.map_class(rule)
        refined_per_class.append(refined)
        spans.append(len(refined))
    lcm_span = 1
    for span in spans:
        lcm_span = lcm_span // _gcd(lcm_span, span) * span
    # output class c covers positions k = c (mod d*lcm); within it the class
    # rho = c mod d runs through its subclass (c div d) mod span with the
    # subclass step advancing lcm/span times slower
    ordered: list[ClassRule] = []
    for c in range(d * lcm_span):
        rho, r = c % d, c // d
        span = spans[rho]
        base = refined_per_class[rho][r % span]
        reps = lcm_span // span
        w_offset = r // span
        level = Affine(base.level.a * reps, base.level(w_offset))
        exp = Affine(base.exp.a * reps, base.exp(w_offset))
        ordered.append(ClassRule(level, base.gen, exp))
    return stub, type(block)(tuple(ordered))


def reindex_iso(w: TopWord, target: CardSeq) -> TopWord:
    """Carry a rank-one word across the canonical enumeration of target ranks.

    Generator m of the source becomes the m-th generator of the target's
    disjoint union in (level, generator) order.  Positions and exponents are
    untouched, so the map is a homomorphism and injective.
    """
    _require_z_profile(w)
    enum = _Enumeration(target)
    out: list[Block] = []
    for block in w.blocks:
        if isinstance(block, FiniteBlock):
            mapped = tuple(enum.map_letter(l) for l in block.letters)
            if mapped:
                out.append(FiniteBlock(mapped))
            continue
        stub, rest = _reindex_infinite(block, enum)
        if isinstance(block, OmegaBlock):
            if stub:
                out.append(FiniteBlock(tuple(stub)))
            out.append(rest)
        else:
            out.append(rest)
            if stub:
                out.append(FiniteBlock(tuple(reversed(stub))))
    return TopWord(tuple(out), target)


# ---------------------------------------------------------------------------
# combinatorial loops


@dataclass(frozen=True)
class LoopRecord:
    """One excursion: which point it wraps, whether it crosses, and its sign."""

    point: str
    crosses: bool
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValidationError("excursion sign must be +1 or -1")


@dataclass(frozen=True)
class LoopClassRule:
    """Schematic excursions for one residue class of an infinite loop block."""

    level: Affine
    gen: Union[Affine, str]
    crosses: bool
    sign: int

    def __post_init__(self):
        if self.sign not in (-1, 1):
            raise ValidationError("excursion sign must be +1 or -1")

    def to_word_rule(self) -> ClassRule:
        return ClassRule(self.level, self.gen, Affine(0, self.sign))


@dataclass(frozen=True)
class FiniteLoopBlock:
    records: tuple[LoopRecord, ...]


@dataclass(frozen=True)
class OmegaLoopBlock:
    classes: tuple[LoopClassRule, ...]


@dataclass(frozen=True)
class OmegaStarLoopBlock:
    classes: tuple[LoopClassRule, ...]


LoopBlock = Union[FiniteLoopBlock, OmegaLoopBlock, OmegaStarLoopBlock]


@dataclass(frozen=True)
class CombinatorialLoop:
    """A based loop as a block sequence of excursions around model points."""

    point_levels: Mapping[str, int]
    blocks: tuple[LoopBlock, ...]
    profile: CardSeq


def reduce_loop(loop: CombinatorialLoop) -> TopWord:
    """Delete non-crossing excursions, then read each survivor as a letter."""
    out: list[Block] = []
    for block in loop.blocks:
        if isinstance(block, FiniteLoopBlock):
            letters = []
            for rec in block.records:
                if not rec.crosses:
                    continue
                if rec.point not in loop.point_levels:
                    raise InputError(f"excursion references unknown point {rec.point!r}")
                letters.append(Letter(loop.point_levels[rec.point], rec.point, rec.sign))
            if letters:
                out.append(FiniteBlock(tuple(letters)))
            continue
        kept = tuple(
            rule.to_word_rule() for rule in block.classes if rule.crosses
        )
        if kept:
            kind = OmegaBlock if isinstance(block, OmegaLoopBlock) else OmegaStarBlock
            out.append(kind(kept))
    return TopWord(tuple(out), loop.profile)
