"""Shared oracles and generators for the test suite.

Everything here recomputes expected answers from first principles with the
dumbest mechanism that works: explicit unit letters, repeated full scans,
exhaustive enumeration, pointwise censuses.  Nothing in this module calls
the code path it cross-checks, so agreement with the library is evidence,
not tautology.
"""

from __future__ import annotations

import itertools
from collections import Counter
from pathlib import Path

from topoprod import (
    ALEPH_OMEGA,
    Affine,
    CardSeq,
    Component,
    ConstantTail,
    FiniteBlock,
    Grouping,
    IncreasingAlephsTail,
    Letter,
    NamedPoint,
    OmegaBlock,
    OmegaStarBlock,
    PairFamily,
    PeriodicTail,
    SpaceModel,
    TopWord,
    UnboundedH,
    ZeroTail,
    aleph,
    card_sum,
    fin,
    finite_seq,
    shift_tail,
    validate,
    z_profile,
)
from topoprod.spacemodel import APPROACHES_BASE, BASEPOINT

FIXTURES = Path(__file__).parent / "fixtures"

# A unit letter is (level, gen, sign) with sign in {-1, +1}; words are lists.


def naive_reduce(units: list) -> list:
    """Repeated-scan free reduction: delete one cancelling pair, start over."""
    out = list(units)
    while True:
        for i in range(len(out) - 1):
            l0, g0, s0 = out[i]
            l1, g1, s1 = out[i + 1]
            if l0 == l1 and g0 == g1 and s0 + s1 == 0:
                del out[i : i + 2]
                break
        else:
            return out


def invert_units(units: list) -> list:
    return [(lvl, gen, -sign) for lvl, gen, sign in reversed(units)]


def pnf_units(p) -> list:
    """Expand a normal form into its unit-letter string."""
    out = []
    for letter in p.letters():
        sign = 1 if letter.exp > 0 else -1
        out.extend((letter.level, letter.gen, sign) for _ in range(abs(letter.exp)))
    return out


def letters_of(units: list) -> list:
    return [Letter(lvl, gen, sign) for lvl, gen, sign in units]


def random_units(rng, length: int, levels: int = 5, rank: int = 2) -> list:
    return [
        (rng.randrange(levels), rng.randrange(rank), rng.choice((-1, 1)))
        for _ in range(length)
    ]


# ---------------------------------------------------------------------------
# roots

def naive_cyclic_strip(units: list) -> tuple:
    """(conjugator prefix, cyclically reduced core) of a reduced unit string."""
    core = list(units)
    conj = []
    while len(core) >= 2:
        l0, g0, s0 = core[0]
        l1, g1, s1 = core[-1]
        if l0 == l1 and g0 == g1 and s0 + s1 == 0:
            conj.append(core[0])
            core = core[1:-1]
        else:
            break
    return conj, core


def oracle_spectrum(units: list, k_max: int) -> set:
    """Exhaustive per-degree root search on the unit string.

    A k-th root exists exactly when the cyclically reduced core is a k-fold
    repetition of its leading segment: roots conjugate along with the word,
    and powers of a cyclically reduced word concatenate with no cancellation,
    so repetition is both necessary and sufficient.
    """
    reduced = naive_reduce(units)
    _, core = naive_cyclic_strip(reduced)
    found = set()
    for k in range(1, k_max + 1):
        if k == 1:
            found.add(k)
            continue
        n = len(core)
        if n % k:
            continue
        if core == core[: n // k] * k:
            found.add(k)
    return found


def core_unit_length(units: list) -> int:
    reduced = naive_reduce(units)
    _, core = naive_cyclic_strip(reduced)
    return len(core)


def brute_roots(u_units: list, k: int, alphabet: list, max_len: int) -> list:
    """Every freely reduced r with len(r) <= max_len and r^k = u."""
    target = naive_reduce(u_units)
    hits = []

    def extend(prefix: list, depth: int):
        if naive_reduce(prefix * k) == target:
            hits.append(list(prefix))
        if depth == max_len:
            return
        for lvl, gen, sign in alphabet:
            if prefix and prefix[-1] == (lvl, gen, -sign):
                continue
            prefix.append((lvl, gen, sign))
            extend(prefix, depth + 1)
            prefix.pop()

    extend([], 0)
    return hits


def reduced_words(alphabet: list, max_len: int) -> list:
    """All freely reduced unit strings over the alphabet, empty included."""
    words = [[]]
    frontier = [[]]
    for _ in range(max_len):
        grown = []
        for w in frontier:
            for lvl, gen, sign in alphabet:
                if w and w[-1] == (lvl, gen, -sign):
                    continue
                grown.append(w + [(lvl, gen, sign)])
        words.extend(grown)
        frontier = grown
    return words


# ---------------------------------------------------------------------------
# topologist words

def pnf_to_word(p, profile: CardSeq) -> TopWord:
    letters = tuple(itertools.chain.from_iterable(s.letters for s in p.syllables))
    return TopWord((FiniteBlock(letters),) if letters else (), profile)


def projection_units(w: TopWord, n: int, scan: int = 400) -> list:
    """Direct filtered enumeration: every letter of level <= n, in order."""
    units = []
    for block in w.blocks:
        if isinstance(block, FiniteBlock):
            seq = list(block.letters)
        else:
            ks = range(scan)
            if isinstance(block, OmegaStarBlock):
                ks = reversed(ks)
            seq = [block.letter_at(k) for k in ks]
        for letter in seq:
            if letter.level <= n:
                sign = 1 if letter.exp > 0 else -1
                units.extend((letter.level, letter.gen, sign) for _ in range(abs(letter.exp)))
    return units


PROFILE_Z = "z"
PROFILE_ALEPH = "aleph"
PROFILE_FIN = "fin"


def make_profile(kind: str) -> CardSeq:
    if kind == PROFILE_Z:
        return z_profile()
    if kind == PROFILE_ALEPH:
        return CardSeq((), ConstantTail(aleph(0)))
    return CardSeq((fin(2), fin(3)), ConstantTail(fin(2)))


def random_letter(rng, kind: str, max_level: int = 6) -> Letter:
    level = rng.randrange(max_level + 1)
    if kind == PROFILE_Z:
        gen = 0
    elif kind == PROFILE_ALEPH:
        gen = rng.randrange(4)
    else:
        gen = rng.randrange(3) if level == 1 else rng.randrange(2)
    return Letter(level, gen, rng.choice((-3, -2, -1, 1, 2, 3)))


def random_class_rule(rng, kind: str):
    from topoprod import ClassRule

    level = Affine(rng.randrange(1, 4), rng.randrange(4))
    if kind == PROFILE_Z:
        gen = Affine(0, 0)
    elif kind == PROFILE_ALEPH:
        gen = rng.choice((Affine(0, rng.randrange(4)), Affine(rng.randrange(1, 3), 0)))
    else:
        gen = Affine(0, rng.randrange(2))
    exp = rng.choice((Affine(0, 1), Affine(0, -1), Affine(0, 2), Affine(1, 1), Affine(-1, -1)))
    return ClassRule(level, gen, exp)


def random_word(rng, kind: str = PROFILE_Z, max_blocks: int = 3) -> TopWord:
    profile = make_profile(kind)
    blocks = []
    for _ in range(rng.randrange(max_blocks + 1)):
        if rng.random() < 0.55:
            letters = tuple(random_letter(rng, kind) for _ in range(rng.randrange(1, 6)))
            blocks.append(FiniteBlock(letters))
        else:
            classes = tuple(random_class_rule(rng, kind) for _ in range(rng.randrange(1, 3)))
            ctor = OmegaBlock if rng.random() < 0.5 else OmegaStarBlock
            blocks.append(ctor(classes))
    return TopWord(tuple(blocks), profile)


# ---------------------------------------------------------------------------
# cardinal sequences

def ez_enumeration(max_len: int = 4, max_sum: int = 6) -> list:
    """Every eventually-zero sequence as a prefix of <= max_len naturals."""
    out = []
    for length in range(max_len + 1):
        for entries in itertools.product(range(max_sum + 1), repeat=length):
            if sum(entries) <= max_sum:
                out.append(finite_seq(*entries))
    return out


def ez_bijection_search(s: CardSeq, t: CardSeq, horizon: int = 16):
    """Pair units off in index order; None when no bijection exists.

    On success returns the per-cutoff certificates (M', M'') confirming the
    bounded-displacement property in both directions.
    """
    src = [(n, j) for n in range(horizon) for j in range(s.value(n).index)]
    dst = [(n, j) for n in range(horizon) for j in range(t.value(n).index)]
    if len(src) != len(dst):
        return None
    pairing = list(zip(src, dst))
    certs = []
    for m in range(horizon):
        fwd = max((dn for (sn, _), (dn, _d) in pairing if sn <= m), default=0)
        bwd = max((sn for (sn, _), (dn, _d) in pairing if dn <= m), default=0)
        certs.append((fwd, bwd))
    return certs


def seq_corpus() -> list:
    """Fifty-plus schematic sequences spanning every verdict regime."""
    a = aleph
    seqs = [
        # eventually zero
        finite_seq(),
        finite_seq(3),
        finite_seq(1, 2),
        finite_seq(0, 0, 3),
        finite_seq(2, 0, 1),
        finite_seq(6),
        finite_seq(1, 1, 1),
        finite_seq(0, 4),
        CardSeq((fin(2), fin(2)), ConstantTail(fin(0))),
        # all finite, not eventually zero
        CardSeq((), ConstantTail(fin(1))),
        CardSeq((), ConstantTail(fin(2))),
        CardSeq((), PeriodicTail((fin(1), fin(2)))),
        CardSeq((), PeriodicTail((fin(0), fin(3)))),
        CardSeq((fin(5),), ConstantTail(fin(1))),
        CardSeq((fin(0), fin(0)), PeriodicTail((fin(2), fin(0)))),
        CardSeq((fin(7), fin(7)), ConstantTail(fin(4))),
        CardSeq((), PeriodicTail((fin(1), fin(1), fin(9)))),
        CardSeq((fin(4),), PeriodicTail((fin(2), fin(5)))),
        # finite tail behind an infinite head
        CardSeq((a(0),), ConstantTail(fin(1))),
        CardSeq((fin(2), a(0)), ConstantTail(fin(1))),
        CardSeq((a(0), a(0)), PeriodicTail((fin(1), fin(0)))),
        CardSeq((a(1),), ConstantTail(fin(2))),
        CardSeq((fin(1), a(1), fin(3)), ConstantTail(fin(1))),
        CardSeq((ALEPH_OMEGA,), ConstantTail(fin(1))),
        CardSeq((a(0), a(1)), ConstantTail(fin(5))),
        CardSeq((a(1), fin(9)), PeriodicTail((fin(0), fin(1)))),
        CardSeq((ALEPH_OMEGA, a(0)), ConstantTail(fin(2))),
        # a stable recurring infinite value
        CardSeq((), ConstantTail(a(0))),
        CardSeq((fin(3),), ConstantTail(a(0))),
        CardSeq((), PeriodicTail((a(0), fin(1)))),
        CardSeq((), PeriodicTail((a(0), a(0), fin(5)))),
        CardSeq((), ConstantTail(a(1))),
        CardSeq((), PeriodicTail((a(1), fin(0)))),
        CardSeq((), PeriodicTail((a(2), a(1)))),
        CardSeq((), ConstantTail(a(2))),
        CardSeq((a(3),), ConstantTail(a(0))),
        CardSeq((fin(1),), PeriodicTail((a(1), a(0)))),
        CardSeq((), ConstantTail(ALEPH_OMEGA)),
        CardSeq((fin(2),), ConstantTail(ALEPH_OMEGA)),
        CardSeq((), PeriodicTail((ALEPH_OMEGA, fin(3)))),
        # tails climbing through the alephs
        CardSeq((), IncreasingAlephsTail(Affine(1, 0))),
        CardSeq((fin(3),), IncreasingAlephsTail(Affine(1, 0))),
        CardSeq((), IncreasingAlephsTail(Affine(1, 5))),
        CardSeq((), IncreasingAlephsTail(Affine(2, 0))),
        CardSeq((), IncreasingAlephsTail(Affine(2, 1))),
        CardSeq((), IncreasingAlephsTail(Affine(3, 2))),
        CardSeq((a(4),), IncreasingAlephsTail(Affine(1, 0))),
        CardSeq((fin(6), fin(0)), IncreasingAlephsTail(Affine(1, 2))),
        CardSeq((ALEPH_OMEGA,), IncreasingAlephsTail(Affine(1, 0))),
        CardSeq((fin(1), ALEPH_OMEGA), IncreasingAlephsTail(Affine(2, 3))),
        CardSeq((a(0), ALEPH_OMEGA), IncreasingAlephsTail(Affine(1, 1))),
    ]
    assert len(seqs) >= 50
    return seqs


def random_seq(rng) -> CardSeq:
    cards = [fin(0), fin(1), fin(2), fin(3), fin(5), aleph(0), aleph(1), aleph(2), ALEPH_OMEGA]
    prefix = tuple(rng.choice(cards) for _ in range(rng.randrange(4)))
    roll = rng.random()
    if roll < 0.2:
        tail = ZeroTail()
    elif roll < 0.45:
        tail = ConstantTail(rng.choice(cards))
    elif roll < 0.75:
        tail = PeriodicTail(tuple(rng.choice(cards) for _ in range(rng.randrange(1, 4))))
    else:
        tail = IncreasingAlephsTail(Affine(rng.randrange(1, 4), rng.randrange(4)))
    return CardSeq(prefix, tail)


def random_grouping(rng) -> Grouping:
    head = tuple(rng.randrange(1, 4) for _ in range(rng.randrange(4)))
    return Grouping(head, rng.randrange(1, 4))


# ---------------------------------------------------------------------------
# space models

def random_model(rng) -> SpaceModel:
    """A random valid model that is never a horseshoe."""
    cards = [fin(1), fin(2), fin(3), fin(4), aleph(0), aleph(1)]
    roll = rng.random()
    if roll < 0.3:
        tail = ZeroTail()
    elif roll < 0.6:
        tail = ConstantTail(rng.choice([fin(0), fin(1), fin(2), aleph(0)]))
    elif roll < 0.85:
        tail = PeriodicTail(
            tuple(rng.choice([fin(0), fin(1), fin(2), fin(3), aleph(0)]) for _ in range(rng.randrange(1, 4)))
        )
    else:
        tail = IncreasingAlephsTail(Affine(rng.randrange(1, 3), rng.randrange(3)))
    prefix = tuple(rng.choice(cards) for _ in range(rng.randrange(5)))
    annuli = CardSeq(prefix, tail)

    points = []
    used = Counter()
    for _ in range(rng.randrange(6)):
        level = rng.randrange(max(len(prefix), 1) + 4)
        total = annuli.value(level)
        if total.is_finite and used[level] >= total.index:
            continue
        used[level] += 1
        points.append(NamedPoint(f"p{len(points)}", level))

    ids = [p.id for p in points]
    rng.shuffle(ids)
    level_of = {p.id: p.level for p in points}
    comps = [Component("base", (BASEPOINT,), APPROACHES_BASE)]
    i = 0
    while i < len(ids):
        size = min(rng.randrange(1, 4), len(ids) - i)
        members = tuple(ids[i : i + size])
        comps.append(Component(f"c{len(comps)}", members, max(level_of[m] for m in members)))
        i += size

    fams = []
    if rng.random() < 0.3:
        if rng.random() < 0.5:
            fams.append(PairFamily(Affine(1, 0), Affine(1, 1), False, UnboundedH()))
        else:
            fams.append(PairFamily(Affine(1, 0), Affine(2, 1), True, UnboundedH()))

    model = SpaceModel(annuli, tuple(points), tuple(comps), tuple(fams))
    assert validate(model) == []
    return model


def census_oracle(m: SpaceModel, window: int = 48) -> list:
    """Direct per-level component count: declared components at their own
    maxLevel plus one singleton per unnamed unit of annulus mass."""
    named = Counter(p.level for p in m.points)
    comps = Counter(c.max_level for c in m.components if isinstance(c.max_level, int))
    out = []
    for n in range(window):
        total = m.annuli.value(n)
        if total.is_infinite:
            out.append(total)
        else:
            out.append(fin(total.index - named.get(n, 0) + comps.get(n, 0)))
    return out


def bump_annuli(seq: CardSeq, level: int) -> CardSeq:
    horizon = max(len(seq.prefix), level + 1)
    prefix = [seq.value(n) for n in range(horizon)]
    prefix[level] = card_sum([prefix[level], fin(1)])
    return CardSeq(tuple(prefix), shift_tail(seq.tail, horizon - len(seq.prefix)))


def add_redundant_point(m: SpaceModel, rng):
    """A copy of m with one more named point inside an existing component.

    The point brings its own unit of annulus mass, so the underlying space
    gains a point but no component; returns None when no component can
    absorb one.
    """
    targets = [c for c in m.components if isinstance(c.max_level, int)]
    if not targets:
        return None
    comp = rng.choice(targets)
    pid = f"r{len(m.points)}"
    points = (*m.points, NamedPoint(pid, comp.max_level))
    comps = tuple(
        Component(c.id, (*c.members, pid), c.max_level) if c.id == comp.id else c
        for c in m.components
    )
    return SpaceModel(bump_annuli(m.annuli, comp.max_level), points, comps, m.pair_families)
