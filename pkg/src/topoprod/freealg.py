"""Exact word calculus in free groups and finite free products of them.

Elements live in a free product of level-indexed free groups: a letter is a
generator power at some level, a syllable is a freely reduced single-level
word, and a normal form is an alternating sequence of nonempty syllables at
pairwise distinct consecutive levels.  Normal forms are canonical, so group
equality is structural equality.  Exponents are stored merged, never as
repeated unit letters, except transiently inside root extraction.

Generator ids are natural numbers, or opaque string tokens for levels of
infinite rank; a single word only ever touches finitely many of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .cardseq import CardSeq
from .errors import (
    BudgetError,
    DeclarationMismatchError,
    InputError,
    LevelMismatchError,
    ValidationError,
)

Gen = Union[int, str]

ROOT_BUDGET = 10**6


@dataclass(frozen=True)
class Letter:
    """A nonzero power of one generator at one level."""

    level: int
    gen: Gen
    exp: int

    def __post_init__(self):
        if not isinstance(self.level, int) or self.level < 0:
            raise ValidationError("letter level must be a natural number")
        if isinstance(self.gen, bool) or not isinstance(self.gen, (int, str)):
            raise ValidationError("generator id must be a natural number or token")
        if isinstance(self.gen, int) and self.gen < 0:
            raise ValidationError("numeric generator ids are natural numbers")
        if isinstance(self.gen, str) and not self.gen:
            raise ValidationError("symbolic generator ids must be nonempty")
        if not isinstance(self.exp, int) or self.exp == 0:
            raise ValidationError("letter exponent must be a nonzero integer")

    def inverse(self) -> "Letter":
        return Letter(self.level, self.gen, -self.exp)


def check_letter(profile: CardSeq, letter: Letter) -> None:
    """Reject letters whose generator id is out of range for the profile."""
    rank = profile.value(letter.level)
    if rank.is_finite:
        if not isinstance(letter.gen, int) or letter.gen >= rank.index:
            raise ValidationError(
                f"generator {letter.gen!r} invalid at level {letter.level}"
                f" of rank {rank.index}"
            )


@dataclass(frozen=True)
class FreeWord:
    """A freely reduced word in one free factor; may be empty."""

    letters: tuple[Letter, ...]

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        levels = {l.level for l in self.letters}
        if len(levels) > 1:
            raise LevelMismatchError(f"mixed levels in one syllable: {sorted(levels)}")
        for a, b in zip(self.letters, self.letters[1:]):
            if a.gen == b.gen:
                raise ValidationError("syllable not freely reduced")

    @property
    def level(self) -> int | None:
        return self.letters[0].level if self.letters else None

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def inverse(self) -> "FreeWord":
        return FreeWord(tuple(l.inverse() for l in reversed(self.letters)))


def reduce_free(letters: Iterable[Letter]) -> FreeWord:
    """The unique freely reduced form of a raw single-level letter sequence."""
    stack: list[Letter] = []
    level: int | None = None
    for letter in letters:
        if level is None:
            level = letter.level
        elif letter.level != level:
            raise LevelMismatchError(
                f"letters at levels {level} and {letter.level} in one syllable"
            )
        if stack and stack[-1].gen == letter.gen:
            merged = stack[-1].exp + letter.exp
            stack.pop()
            if merged:
                stack.append(Letter(letter.level, letter.gen, merged))
        else:
            stack.append(letter)
    return FreeWord(tuple(stack))


@dataclass(frozen=True)
class ProductNormalForm:
    """Canonical form in the free product of the level factors.

    The empty syllable sequence is the identity.  level_bound records the
    ambient product the element is considered in; it does not take part in
    equality, which is determined by the syllables alone.
    """

    syllables: tuple[FreeWord, ...]
    level_bound: int = field(default=0, compare=False)
    profile: CardSeq | None = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "syllables", tuple(self.syllables))
        top = 0
        for syl in self.syllables:
            if syl.is_identity:
                raise ValidationError("normal form contains an empty syllable")
            top = max(top, syl.level)
        for a, b in zip(self.syllables, self.syllables[1:]):
            if a.level == b.level:
                raise ValidationError("adjacent syllables share a level")
        if top > self.level_bound:
            object.__setattr__(self, "level_bound", top)
        if self.profile is not None:
            for syl in self.syllables:
                for letter in syl.letters:
                    check_letter(self.profile, letter)

    @property
    def is_identity(self) -> bool:
        return not self.syllables

    def letters(self):
        for syl in self.syllables:
            yield from syl.letters


def identity(profile: CardSeq | None = None) -> ProductNormalForm:
    return ProductNormalForm((), 0, profile)


def normal_form(
    syllables: Iterable[Iterable[Letter]],
    level_bound: int = 0,
    profile: CardSeq | None = None,
) -> ProductNormalForm:
    """Normalize a raw syllable sequence: reduce, drop empties, merge neighbors."""
    stack: list[FreeWord] = []
    for raw in syllables:
        pending = raw if isinstance(raw, FreeWord) else reduce_free(raw)
        while not pending.is_identity:
            if stack and stack[-1].level == pending.level:
                pending = reduce_free((*stack.pop().letters, *pending.letters))
            else:
                stack.append(pending)
                break
    return ProductNormalForm(tuple(stack), level_bound, profile)


def word_from_letters(
    letters: Iterable[Letter],
    level_bound: int = 0,
    profile: CardSeq | None = None,
) -> ProductNormalForm:
    """Normal form of a flat letter stream, split at level changes."""
    groups: list[list[Letter]] = []
    for letter in letters:
        if groups and groups[-1][0].level == letter.level:
            groups[-1].append(letter)
        else:
            groups.append([letter])
    return normal_form(groups, level_bound, profile)


def _merge_profiles(u: ProductNormalForm, v: ProductNormalForm) -> CardSeq | None:
    if u.profile is not None and v.profile is not None and u.profile != v.profile:
        raise DeclarationMismatchError("operands declare different level ranks")
    return u.profile if u.profile is not None else v.profile


def multiply(u: ProductNormalForm, v: ProductNormalForm) -> ProductNormalForm:
    return normal_form(
        (*u.syllables, *v.syllables),
        max(u.level_bound, v.level_bound),
        _merge_profiles(u, v),
    )


def invert(u: ProductNormalForm) -> ProductNormalForm:
    return ProductNormalForm(
        tuple(syl.inverse() for syl in reversed(u.syllables)),
        u.level_bound,
        u.profile,
    )


def power(u: ProductNormalForm, k: int) -> ProductNormalForm:
    """u^k for k >= 0, by binary exponentiation."""
    if k < 0:
        raise InputError("power exponent must be a natural number")
    acc = identity(u.profile)
    base = u
    while k:
        if k & 1:
            acc = multiply(acc, base)
        base = multiply(base, base)
        k >>= 1
    return acc


def cyclic_reduce(
    u: ProductNormalForm,
) -> tuple[ProductNormalForm, ProductNormalForm]:
    """Split u = conjugator * core * conjugator^-1 with core cyclically reduced.

    Runs first at syllable granularity (wrapping first and last syllables of
    equal level), then inside a lone surviving syllable at letter granularity.
    """
    conj_pieces: list[FreeWord] = []
    core = u
    while len(core.syllables) >= 2 and core.syllables[0].level == core.syllables[-1].level:
        first = core.syllables[0]
        conj_pieces.append(first)
        core = normal_form((*core.syllables[1:], first), core.level_bound)
    if len(core.syllables) == 1:
        letters = core.syllables[0].letters
        while len(letters) >= 2 and letters[0].gen == letters[-1].gen:
            head = letters[0]
            conj_pieces.append(FreeWord((head,)))
            merged = letters[-1].exp + head.exp
            mid = letters[1:-1]
            if merged:
                letters = (*mid, Letter(head.level, head.gen, merged))
            else:
                letters = mid
        core = ProductNormalForm(
            (FreeWord(letters),) if letters else (), core.level_bound
        )
    conjugator = normal_form(conj_pieces, u.level_bound, u.profile)
    core = ProductNormalForm(core.syllables, u.level_bound, u.profile)
    return core, conjugator


def _unit_expansion(u: ProductNormalForm, budget: int) -> list[tuple[int, Gen, int]]:
    units: list[tuple[int, Gen, int]] = []
    total = 0
    for letter in u.letters():
        total += abs(letter.exp)
        if total > budget:
            raise BudgetError(
                f"root search needs {total}+ unit letters, budget is {budget}"
            )
        sign = 1 if letter.exp > 0 else -1
        units.extend((letter.level, letter.gen, sign) for _ in range(abs(letter.exp)))
    return units


def _core_root(
    core: ProductNormalForm, k: int, budget: int
) -> ProductNormalForm | None:
    flat = list(core.letters())
    if len(flat) == 1:
        letter = flat[0]
        if letter.exp % k:
            return None
        return ProductNormalForm(
            (FreeWord((Letter(letter.level, letter.gen, letter.exp // k),)),),
            core.level_bound,
        )
    units = _unit_expansion(core, budget)
    if len(units) % k:
        return None
    period = len(units) // k
    if any(units[i] != units[i + period] for i in range(len(units) - period)):
        return None
    candidate = word_from_letters(
        (Letter(lvl, gen, sign) for lvl, gen, sign in units[:period]),
        core.level_bound,
    )
    # a root of a cyclically reduced word concatenates without cancellation,
    # so the periodicity check is complete; reassemble as a final guard
    if power(candidate, k) != core:
        return None
    return candidate


def kth_root(
    u: ProductNormalForm, k: int, budget: int = ROOT_BUDGET
) -> ProductNormalForm | None:
    """Some r with r^k = u, or None; exact for single-letter cyclic cores."""
    if not isinstance(k, int) or k < 1:
        raise InputError("root degree must be a natural number >= 1")
    if k == 1 or u.is_identity:
        return u
    core, conj = cyclic_reduce(u)
    root = _core_root(core, k, budget)
    if root is None:
        return None
    return multiply(multiply(conj, root), invert(conj))


def divisibility_spectrum(
    u: ProductNormalForm, k_max: int, budget: int = ROOT_BUDGET
) -> set[int]:
    """All k <= k_max admitting a k-th root of u; finite for nontrivial u."""
    if u.is_identity:
        raise InputError("identity is divisible by every degree")
    if k_max < 1:
        return set()
    return {k for k in range(1, k_max + 1) if kth_root(u, k, budget) is not None}
