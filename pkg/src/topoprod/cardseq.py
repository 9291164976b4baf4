"""Symbolic cardinal sequences and their block-bijection equivalence.

A CardSeq describes an infinite sequence of cardinals by an explicit finite
prefix plus a schematic tail.  The cardinal universe is deliberately small:
finite cardinals, the alephs with natural index, and the first aleph with
limit index.  Two sequences are equivalent when some bijection between the
disjoint unions of their entries moves every finite head into a finite head
on the other side, in both directions.  seq_equiv decides this and, on
success, returns a BijectionPlan: a finitary description of such a bijection
together with certificates that it has the bounded-displacement property.

The decision runs through three conditions, each checked symbolically:

1. both sequences are eventually zero, or neither is;
2. for every infinite cardinal kappa, one sequence is eventually strictly
   below kappa exactly when the other is (a finite test set of kappas
   suffices: flips can only happen at a member's successor or a tail's sup);
3. partial sums dominate each other: for each M there is M' with
   S_s(M) <= S_t(M') and vice versa.

Positive verdicts carry one of five plan shapes, matching how the witness
bijection is built in each regime: both eventually zero; both eventually
finite with all entries finite; both eventually finite with an infinite
prefix; a stable recurring infinite value; or tails climbing through the
alephs, where the bijection alternates inclusions back and forth between
ever-larger blocks.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Iterator, Union

from .affine import Affine
from .errors import Error, InputError, ValidationError

# ---------------------------------------------------------------------------
# cardinals


@total_ordering
@dataclass(frozen=True)
class Cardinal:
    """A finite cardinal, an indexed aleph, or the first limit aleph."""

    kind: str
    index: int = 0

    _KINDS = ("fin", "aleph", "alephOmega")

    def __post_init__(self):
        if self.kind not in self._KINDS:
            raise ValidationError(f"unknown cardinal kind {self.kind!r}")
        if not isinstance(self.index, int) or self.index < 0:
            raise ValidationError("cardinal index must be a natural number")
        if self.kind == "alephOmega" and self.index != 0:
            raise ValidationError("the limit aleph carries no index")

    @property
    def is_finite(self) -> bool:
        return self.kind == "fin"

    @property
    def is_infinite(self) -> bool:
        return self.kind != "fin"

    def _key(self) -> tuple[int, int]:
        return (self._KINDS.index(self.kind), self.index)

    def __lt__(self, other: "Cardinal") -> bool:
        return self._key() < other._key()

    def successor(self) -> "Cardinal | None":
        """The next cardinal, or None for the limit aleph (out of universe)."""
        if self.kind == "fin":
            return Cardinal("fin", self.index + 1)
        if self.kind == "aleph":
            return Cardinal("aleph", self.index + 1)
        return None

    def __repr__(self) -> str:
        if self.kind == "fin":
            return f"fin({self.index})"
        if self.kind == "aleph":
            return f"aleph({self.index})"
        return "alephOmega"


def fin(k: int) -> Cardinal:
    return Cardinal("fin", k)


def aleph(i: int) -> Cardinal:
    return Cardinal("aleph", i)


ALEPH_OMEGA = Cardinal("alephOmega")

ZERO = fin(0)


def card_sum(values) -> Cardinal:
    """Cardinal sum: ordinary arithmetic while finite, max once infinite."""
    best: Cardinal | None = None
    total = 0
    for v in values:
        if v.is_infinite:
            if best is None or best < v:
                best = v
        else:
            total += v.index
    if best is not None:
        return best
    return fin(total)


# ---------------------------------------------------------------------------
# tails and sequences


@dataclass(frozen=True)
class ZeroTail:
    def value(self, k: int) -> Cardinal:
        return ZERO


@dataclass(frozen=True)
class ConstantTail:
    constant: Cardinal

    def value(self, k: int) -> Cardinal:
        return self.constant


@dataclass(frozen=True)
class PeriodicTail:
    values: tuple[Cardinal, ...]

    def __post_init__(self):
        if not self.values:
            raise ValidationError("periodic tail needs at least one value")

    def value(self, k: int) -> Cardinal:
        return self.values[k % len(self.values)]


@dataclass(frozen=True)
class IncreasingAlephsTail:
    """Tail value at offset k is aleph(index(k)); index must be strictly increasing."""

    index: Affine

    def __post_init__(self):
        if self.index.a < 1:
            raise ValidationError("aleph index schema must strictly increase")
        if self.index.b < 0:
            raise ValidationError("aleph index schema must start at a natural number")

    def value(self, k: int) -> Cardinal:
        return aleph(self.index(k))


Tail = Union[ZeroTail, ConstantTail, PeriodicTail, IncreasingAlephsTail]


def _tail_period(tail: Tail) -> int:
    return len(tail.values) if isinstance(tail, PeriodicTail) else 1


def _tail_members(tail: Tail) -> tuple[Cardinal, ...]:
    """The finitely many values a (non-climbing) tail cycles through."""
    if isinstance(tail, ZeroTail):
        return (ZERO,)
    if isinstance(tail, ConstantTail):
        return (tail.constant,)
    if isinstance(tail, PeriodicTail):
        return tail.values
    return ()


def shift_tail(tail: Tail, delta: int) -> Tail:
    """The tail seen from `delta` positions further in."""
    if delta == 0 or isinstance(tail, (ZeroTail, ConstantTail)):
        return tail
    if isinstance(tail, PeriodicTail):
        p = len(tail.values)
        r = delta % p
        return PeriodicTail(tail.values[r:] + tail.values[:r])
    return IncreasingAlephsTail(tail.index.shifted(delta))


@dataclass(frozen=True)
class CardSeq:
    """An explicit prefix followed by a schematic tail."""

    prefix: tuple[Cardinal, ...]
    tail: Tail

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(self.prefix))
        for v in self.prefix:
            if not isinstance(v, Cardinal):
                raise ValidationError("prefix entries must be cardinals")
        t = self.tail
        if isinstance(t, PeriodicTail) and len(set(t.values)) == 1:
            # canonical form: a periodic tail of one repeated value is constant
            t = ConstantTail(t.values[0])
            object.__setattr__(self, "tail", t)

    def value(self, n: int) -> Cardinal:
        if n < 0:
            raise InputError("sequence index must be a natural number")
        if n < len(self.prefix):
            return self.prefix[n]
        return self.tail.value(n - len(self.prefix))

    def values(self, start: int = 0) -> Iterator[Cardinal]:
        for n in itertools.count(start):
            yield self.value(n)

    def partial_sum(self, m: int) -> Cardinal:
        """S(m): the cardinal sum of entries 0..m."""
        if m < 0:
            raise InputError("partial sums are indexed from 0")
        return card_sum(self.value(n) for n in range(m + 1))


def constant_seq(value: Cardinal) -> CardSeq:
    return CardSeq((), ConstantTail(value))


def finite_seq(*entries: int) -> CardSeq:
    """An eventually-zero sequence from explicit natural entries."""
    return CardSeq(tuple(fin(k) for k in entries), ZeroTail())


# ---------------------------------------------------------------------------
# pointwise eventual behavior


def eventually_zero(s: CardSeq) -> bool:
    t = s.tail
    if isinstance(t, ZeroTail):
        return True
    if isinstance(t, ConstantTail):
        return t.constant == ZERO
    return False


def eventually_below(s: CardSeq, kappa: Cardinal) -> bool:
    """Whether s(n) < kappa for all large n.  kappa must be infinite."""
    if kappa.is_finite:
        raise InputError("eventual boundedness is asked of infinite cardinals only")
    t = s.tail
    if isinstance(t, IncreasingAlephsTail):
        return kappa == ALEPH_OMEGA
    return max(_tail_members(t)) < kappa


def _has_infinite_value(s: CardSeq) -> bool:
    if isinstance(s.tail, IncreasingAlephsTail):
        return True
    return any(v.is_infinite for v in s.prefix) or any(
        v.is_infinite for v in _tail_members(s.tail)
    )


# ---------------------------------------------------------------------------
# partial-sum behavior


@dataclass(frozen=True)
class _SumBehavior:
    kind: str  # "stabilizes" | "growing_finite" | "growing_alephs"
    total: Cardinal | None = None
    stable_at: int = 0


def _sum_behavior(s: CardSeq) -> _SumBehavior:
    p = len(s.prefix)
    if isinstance(s.tail, IncreasingAlephsTail):
        if ALEPH_OMEGA in s.prefix:
            idx = s.prefix.index(ALEPH_OMEGA)
            return _SumBehavior("stabilizes", ALEPH_OMEGA, idx)
        return _SumBehavior("growing_alephs")
    members = _tail_members(s.tail)
    infinite = [v for v in (*s.prefix, *members) if v.is_infinite]
    if infinite:
        top = max(infinite)
        for n in range(p + _tail_period(s.tail)):
            if s.value(n) == top:
                return _SumBehavior("stabilizes", top, n)
        raise Error("internal: stabilization point not found")
    if any(v > ZERO for v in members):
        return _SumBehavior("growing_finite")
    stable_at = max(p - 1, 0)
    return _SumBehavior("stabilizes", s.partial_sum(stable_at), stable_at)


def _least_index_with_sum(t: CardSeq, x: Cardinal, strict: bool) -> int | None:
    """Least n with S_t(n) >= x (or > x when strict), None if sums never get there."""
    p = len(t.prefix)
    q = _tail_period(t.tail)
    b = _sum_behavior(t)
    if b.kind == "stabilizes":
        limit = b.stable_at
    elif b.kind == "growing_finite":
        if x.is_infinite:
            return None
        limit = p + q * (x.index + 2)
    else:  # growing_alephs
        if x == ALEPH_OMEGA:
            limit = p  # only an explicit prefix entry can reach the limit aleph
        elif x.is_finite:
            limit = p + q
        else:
            assert isinstance(t.tail, IncreasingAlephsTail)
            limit = p + t.tail.index.first_at_least(x.index + (1 if strict else 0)) + 1
    running = ZERO
    best_inf: Cardinal | None = None
    total = 0
    for n in range(limit + 1):
        v = t.value(n)
        if v.is_infinite:
            if best_inf is None or best_inf < v:
                best_inf = v
        else:
            total += v.index
        running = best_inf if best_inf is not None else fin(total)
        if (running > x) if strict else (running >= x):
            return n
    return None


def sums_dominated(s: CardSeq, t: CardSeq, m: int) -> int | None:
    """Least m' with S_s(m) <= S_t(m'), or None when no finite head of t suffices."""
    return _least_index_with_sum(t, s.partial_sum(m), strict=False)


# ---------------------------------------------------------------------------
# regrouping


@dataclass(frozen=True)
class Grouping:
    """A finite-to-one surjection collapsing consecutive index ranges.

    Block k of the grouped sequence covers head[k] source indices for k below
    len(head), and tail_block indices ever after.
    """

    head: tuple[int, ...]
    tail_block: int

    def __post_init__(self):
        object.__setattr__(self, "head", tuple(self.head))
        if any(not isinstance(n, int) or n < 1 for n in self.head):
            raise ValidationError("grouping blocks must have length >= 1")
        if not isinstance(self.tail_block, int) or self.tail_block < 1:
            raise ValidationError("grouping tail block must have length >= 1")


def regroup(s: CardSeq, g: Grouping) -> CardSeq:
    """Sum s over g's consecutive blocks; preserves the equivalence class."""
    out: list[Cardinal] = []
    pos = 0
    for width in g.head:
        out.append(card_sum(s.value(pos + i) for i in range(width)))
        pos += width
    c = g.tail_block
    p = len(s.prefix)
    while pos < p:
        out.append(card_sum(s.value(pos + i) for i in range(c)))
        pos += c
    offset = pos - p
    t = s.tail
    if isinstance(t, ZeroTail):
        tail: Tail = ZeroTail()
    elif isinstance(t, ConstantTail):
        v = t.constant
        tail = ConstantTail(v if v.is_infinite else fin(v.index * c))
    elif isinstance(t, PeriodicTail):
        period = len(t.values)
        blocks = _lcm(period, c) // c
        tail = PeriodicTail(
            tuple(
                card_sum(t.value(offset + k * c + i) for i in range(c))
                for k in range(blocks)
            )
        )
    else:
        idx = t.index
        tail = IncreasingAlephsTail(Affine(idx.a * c, idx.a * (offset + c - 1) + idx.b))
    return CardSeq(tuple(out), tail)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


def _lcm(a: int, b: int) -> int:
    return a // _gcd(a, b) * b


# ---------------------------------------------------------------------------
# bijection plans


@dataclass(frozen=True)
class Piece:
    """`units` elements moved between a source and a target index range."""

    src: tuple[int, int]
    dst: tuple[int, int]
    units: Cardinal


@dataclass(frozen=True)
class UnitPairing:
    """Pair the unit streams of two all-finite regions in index order."""

    s_from: int
    t_from: int


@dataclass(frozen=True)
class SegmentPairing:
    """Match consecutive segments that each sum to the same stable value."""

    s_from: int
    s_step: int
    t_from: int
    t_step: int
    units: Cardinal


@dataclass(frozen=True)
class BackAndForth:
    """Alternate inclusions between blocks of strictly climbing alephs."""

    s_from: int
    t_from: int


Rule = Union[UnitPairing, SegmentPairing, BackAndForth]

CASE_EVENTUALLY_ZERO = "EventuallyZero"
CASE_ALL_FINITE = "EventuallyFiniteAllFinite"
CASE_INFINITE_PREFIX = "EventuallyFiniteInfinitePrefix"
CASE_SUCCESSOR = "SuccessorStable"
CASE_LIMIT = "LimitBackAndForth"


@dataclass(frozen=True)
class BijectionPlan:
    """A finitary witness for equivalence, auditable and realizable.

    head lists explicit pieces; rule generates the rest.  Pieces appear in a
    fixed order with nondecreasing source and target starts, so any finite
    window of the bijection is reproducible.  The certificates are affine
    overestimates: every unit at source index <= M lands at target index
    <= forward_cert(M), and symmetrically for backward_cert.
    """

    case: str
    source: CardSeq
    target: CardSeq
    head: tuple[Piece, ...]
    rule: Rule | None
    forward_cert: Affine
    backward_cert: Affine

    def pieces(self, src_stop: int, dst_stop: int) -> Iterator[Piece]:
        """All pieces until both range starts pass the given stops."""
        for piece in self._all_pieces():
            if piece.src[0] > src_stop and piece.dst[0] > dst_stop:
                return
            yield piece

    def _all_pieces(self) -> Iterator[Piece]:
        yield from self.head
        rule = self.rule
        if rule is None:
            return
        if isinstance(rule, UnitPairing):
            yield from _unit_pairing_pieces(self.source, self.target, rule)
        elif isinstance(rule, SegmentPairing):
            yield from _segment_pieces(rule)
        else:
            yield from _back_and_forth_pieces(self.source, self.target, rule)


def _unit_pairing_pieces(s: CardSeq, t: CardSeq, rule: UnitPairing) -> Iterator[Piece]:
    n, m = rule.s_from, rule.t_from

    def pull(seq: CardSeq, idx: int) -> tuple[int, int]:
        while True:
            v = seq.value(idx)
            if v.is_infinite:
                raise Error("internal: unit pairing over an infinite entry")
            if v.index > 0:
                return idx, v.index
            idx += 1

    n, rem_n = pull(s, n)
    m, rem_m = pull(t, m)
    while True:
        step = min(rem_n, rem_m)
        yield Piece((n, n), (m, m), fin(step))
        rem_n -= step
        rem_m -= step
        if rem_n == 0:
            n, rem_n = pull(s, n + 1)
        if rem_m == 0:
            m, rem_m = pull(t, m + 1)


def _segment_pieces(rule: SegmentPairing) -> Iterator[Piece]:
    for k in itertools.count():
        src_lo = rule.s_from + k * rule.s_step
        dst_lo = rule.t_from + k * rule.t_step
        yield Piece(
            (src_lo, src_lo + rule.s_step - 1),
            (dst_lo, dst_lo + rule.t_step - 1),
            rule.units,
        )


def _climb_index_at_least(seq: CardSeq, lo: int, c: Cardinal) -> int:
    """Least index >= max(lo, prefix end) whose climbing-tail value is >= c."""
    assert isinstance(seq.tail, IncreasingAlephsTail)
    p = len(seq.prefix)
    k = max(lo - p, 0)
    if c.is_infinite:
        if c == ALEPH_OMEGA:
            raise Error("internal: climbing tails stay below the limit aleph")
        k = max(k, seq.tail.index.first_at_least(c.index))
    return p + k


def _chain(s: CardSeq, t: CardSeq, rule: BackAndForth) -> Iterator[tuple[int, int]]:
    """Cut indices (n_k, m_k) of the alternating back-and-forth blocks."""
    p_s, p_t = len(s.prefix), len(t.prefix)
    sigma_s = card_sum(s.value(i) for i in range(rule.s_from, max(p_s, rule.s_from)))
    sigma_t = card_sum(t.value(i) for i in range(rule.t_from, max(p_t, rule.t_from)))
    n = _climb_index_at_least(s, rule.s_from, sigma_s)
    m = _climb_index_at_least(t, rule.t_from, max(sigma_t, s.value(n)))
    while True:
        yield n, m
        n = _climb_index_at_least(s, n + 1, t.value(m))
        m = _climb_index_at_least(t, m + 1, s.value(n))


def _back_and_forth_pieces(s: CardSeq, t: CardSeq, rule: BackAndForth) -> Iterator[Piece]:
    cuts = _chain(s, t, rule)
    n1, m1 = next(cuts)
    src_lo, dst_lo = rule.s_from, rule.t_from
    n_prev, m_prev = n1, m1
    yield Piece((src_lo, n1), (dst_lo, m1), s.value(n1))
    for n, m in cuts:
        # everything of the previous target block not yet hit goes back into
        # the next source block, which then maps forward into the next target
        yield Piece((n_prev + 1, n), (dst_lo, m_prev), t.value(m_prev))
        dst_lo = m_prev + 1
        yield Piece((n_prev + 1, n), (dst_lo, m), s.value(n))
        n_prev, m_prev = n, m


# ---------------------------------------------------------------------------
# the equivalence verdict


@dataclass(frozen=True)
class SeqVerdict:
    equivalent: bool
    failing_condition: int | None = None
    witness: dict | None = None
    plan: BijectionPlan | None = None


def _kappa_test_set(s: CardSeq, t: CardSeq) -> list[Cardinal]:
    kappas = {aleph(0)}
    for seq in (s, t):
        values = [*seq.prefix, *_tail_members(seq.tail)]
        for v in values:
            if v.is_infinite:
                kappas.add(v)
                succ = v.successor()
                if succ is not None:
                    kappas.add(succ)
        if isinstance(seq.tail, IncreasingAlephsTail):
            kappas.add(ALEPH_OMEGA)
    return sorted(kappas)


def _condition2(s: CardSeq, t: CardSeq) -> Cardinal | None:
    for kappa in _kappa_test_set(s, t):
        if eventually_below(s, kappa) != eventually_below(t, kappa):
            return kappa
    return None


def _condition3(s: CardSeq, t: CardSeq) -> dict | None:
    """None when partial sums dominate both ways, else a witness."""
    bs, bt = _sum_behavior(s), _sum_behavior(t)

    def witness(side: str, m: int) -> dict:
        return {"side": side, "m": m}

    if bs.kind == "stabilizes" and bt.kind == "stabilizes":
        if bs.total == bt.total:
            return None
        if bs.total > bt.total:
            m = _least_index_with_sum(s, bt.total, strict=True)
            return witness("left", m)
        m = _least_index_with_sum(t, bs.total, strict=True)
        return witness("right", m)
    if bs.kind == bt.kind:
        return None

    def against(stab_side: str, stab: _SumBehavior, other_seq: CardSeq, other: _SumBehavior) -> dict:
        grow_side = "right" if stab_side == "left" else "left"
        stab_seq = s if stab_side == "left" else t
        if other.kind == "growing_finite":
            if stab.total.is_infinite:
                m = next(
                    n for n in range(stab.stable_at + 1)
                    if stab_seq.partial_sum(n).is_infinite
                )
                return witness(stab_side, m)
            m = _least_index_with_sum(other_seq, stab.total, strict=True)
            return witness(grow_side, m)
        # other grows through the alephs
        if stab.total == ALEPH_OMEGA:
            return witness(stab_side, stab.stable_at)
        m = _least_index_with_sum(other_seq, stab.total, strict=True)
        return witness(grow_side, m)

    if bs.kind == "stabilizes":
        return against("left", bs, t, bt)
    if bt.kind == "stabilizes":
        return against("right", bt, s, bs)
    # growing_finite against growing_alephs: the aleph side escapes
    aleph_side = "left" if bs.kind == "growing_alephs" else "right"
    seq = s if aleph_side == "left" else t
    m = next(n for n in range(len(seq.prefix) + 2) if seq.partial_sum(n).is_infinite)
    return witness(aleph_side, m)


def _first_all_finite_from(s: CardSeq) -> int:
    """First index from which every entry is finite (tails assumed finite)."""
    last = -1
    for i, v in enumerate(s.prefix):
        if v.is_infinite:
            last = i
    return last + 1


def _finite_growth_stats(s: CardSeq, start: int) -> tuple[int, int, int]:
    """(count, max entry, period) of the finite region of s from `start`."""
    p = len(s.prefix)
    q = _tail_period(s.tail)
    total = sum(s.value(i).index for i in range(start, max(p, start)))
    top = max(
        (s.value(i).index for i in range(start, max(p, start))),
        default=0,
    )
    top = max(top, max((v.index for v in _tail_members(s.tail)), default=0))
    return total, max(top, 1), q


def _build_plan(s: CardSeq, t: CardSeq) -> BijectionPlan:
    if eventually_zero(s):
        z = max(len(s.prefix), len(t.prefix))
        total = s.partial_sum(z - 1) if z else ZERO
        head: tuple[Piece, ...] = ()
        if total != ZERO:
            head = (Piece((0, z - 1), (0, z - 1), total),)
        cert = Affine(0, max(z - 1, 0))
        return BijectionPlan(CASE_EVENTUALLY_ZERO, s, t, head, None, cert, cert)

    if eventually_below(s, aleph(0)):
        if not _has_infinite_value(s) and not _has_infinite_value(t):
            return _plan_all_finite(s, t)
        return _plan_infinite_prefix(s, t)

    if isinstance(s.tail, IncreasingAlephsTail):
        if not isinstance(t.tail, IncreasingAlephsTail):
            raise Error("internal: limit case with mismatched tails")
        return _plan_limit(s, t)
    return _plan_successor(s, t)


def _unit_pairing_certs(
    s: CardSeq, t: CardSeq, s_from: int, t_from: int
) -> tuple[Affine, Affine]:
    c_s, u_s, _ = _finite_growth_stats(s, s_from)
    c_t, u_t, _ = _finite_growth_stats(t, t_from)
    q_s = _tail_period(s.tail)
    q_t = _tail_period(t.tail)
    p_s, p_t = len(s.prefix), len(t.prefix)
    fwd = Affine(q_t * u_s, t_from + p_t + q_t * (c_s + u_s) + q_t)
    bwd = Affine(q_s * u_t, s_from + p_s + q_s * (c_t + u_t) + q_s)
    return fwd, bwd


def _plan_all_finite(s: CardSeq, t: CardSeq) -> BijectionPlan:
    fwd, bwd = _unit_pairing_certs(s, t, 0, 0)
    return BijectionPlan(CASE_ALL_FINITE, s, t, (), UnitPairing(0, 0), fwd, bwd)


def _plan_infinite_prefix(s: CardSeq, t: CardSeq) -> BijectionPlan:
    b_s, b_t = _first_all_finite_from(s), _first_all_finite_from(t)
    if b_s == 0 or b_t == 0:
        raise Error("internal: infinite-prefix case without an infinite head")
    total_s = s.partial_sum(b_s - 1)
    total_t = t.partial_sum(b_t - 1)
    if total_s != total_t:
        raise Error("internal: unequal infinite heads after condition 3")
    head = (Piece((0, b_s - 1), (0, b_t - 1), total_s),)
    fwd, bwd = _unit_pairing_certs(s, t, b_s, b_t)
    fwd = Affine(fwd.a, fwd.b + b_t)
    bwd = Affine(bwd.a, bwd.b + b_s)
    return BijectionPlan(
        CASE_INFINITE_PREFIX, s, t, head, UnitPairing(b_s, b_t), fwd, bwd
    )


def _plan_successor(s: CardSeq, t: CardSeq) -> BijectionPlan:
    eta_s = max(_tail_members(s.tail))
    eta_t = max(_tail_members(t.tail))
    if eta_s != eta_t:
        raise Error("internal: unequal stable values after condition 2")
    bs, bt = _sum_behavior(s), _sum_behavior(t)
    if bs.total != bt.total:
        raise Error("internal: unequal totals after condition 3")
    q_s, q_t = _tail_period(s.tail), _tail_period(t.tail)
    s0 = len(s.prefix) + q_s
    t0 = len(t.prefix) + q_t
    head = (Piece((0, s0 - 1), (0, t0 - 1), bs.total),)
    rule = SegmentPairing(s0, q_s, t0, q_t, eta_s)
    fwd = Affine(q_t, t0 + 2 * q_t)
    bwd = Affine(q_s, s0 + 2 * q_s)
    return BijectionPlan(CASE_SUCCESSOR, s, t, head, rule, fwd, bwd)


def _plan_limit(s: CardSeq, t: CardSeq) -> BijectionPlan:
    h_s = max((i for i, v in enumerate(s.prefix) if v == ALEPH_OMEGA), default=-1)
    h_t = max((i for i, v in enumerate(t.prefix) if v == ALEPH_OMEGA), default=-1)
    if (h_s >= 0) != (h_t >= 0):
        raise Error("internal: unmatched limit-aleph heads after condition 3")
    head: tuple[Piece, ...] = ()
    if h_s >= 0:
        head = (Piece((0, h_s), (0, h_t), ALEPH_OMEGA),)
    rule = BackAndForth(h_s + 1, h_t + 1)
    cuts = _chain(s, t, rule)
    n1, m1 = next(cuts)
    n2, _ = next(cuts)
    a_s = s.tail.index.a
    a_t = t.tail.index.a
    fwd = Affine(2 * a_s + 3, m1 + 2 * a_s + 4 + max(h_t, 0))
    bwd = Affine(2 * a_t + 3, n2 + 2 * a_t + 4 + max(h_s, 0))
    return BijectionPlan(CASE_LIMIT, s, t, head, rule, fwd, bwd)


def seq_equiv(s: CardSeq, t: CardSeq) -> SeqVerdict:
    """Decide equivalence; positive verdicts carry an audited-shape plan."""
    ez_s, ez_t = eventually_zero(s), eventually_zero(t)
    if ez_s != ez_t:
        return SeqVerdict(
            False, 1, {"leftEventuallyZero": ez_s, "rightEventuallyZero": ez_t}
        )
    kappa = _condition2(s, t)
    if kappa is not None:
        return SeqVerdict(
            False,
            2,
            {
                "kappa": kappa,
                "leftEventuallyBelow": eventually_below(s, kappa),
                "rightEventuallyBelow": eventually_below(t, kappa),
            },
        )
    w3 = _condition3(s, t)
    if w3 is not None:
        return SeqVerdict(False, 3, w3)
    return SeqVerdict(True, None, None, _build_plan(s, t))


# ---------------------------------------------------------------------------
# realization and audit


def realize_bijection(plan: BijectionPlan, m: int) -> tuple[dict, ...]:
    """Explicit assignments for the first m source blocks (indices < m).

    Finite pieces are expanded to unit granularity as
    {"source": [index, offset], "target": [index, offset]}; infinite pieces
    stay symbolic as {"sourceRange", "targetRange", "cardinality"} entries.
    Restrictions agree: realize(plan, m) is a prefix of realize(plan, m').
    """
    if m <= 0:
        return ()
    out: list[dict] = []
    consumed_src: dict[int, int] = {}
    consumed_dst: dict[int, int] = {}
    for piece in plan.pieces(src_stop=m - 1, dst_stop=-1):
        if piece.src[0] > m - 1:
            continue
        if piece.units.is_infinite:
            out.append(
                {
                    "sourceRange": list(piece.src),
                    "targetRange": list(piece.dst),
                    "cardinality": piece.units,
                }
            )
            continue

        def draw(seq: CardSeq, rng: tuple[int, int], consumed: dict[int, int], count: int):
            picked: list[tuple[int, int]] = []
            idx = rng[0]
            while len(picked) < count:
                if idx > rng[1]:
                    raise Error("internal: piece exceeds its range supply")
                v = seq.value(idx)
                have = consumed.get(idx, 0)
                room = count - len(picked) if v.is_infinite else v.index - have
                if room <= 0:
                    idx += 1
                    continue
                take = min(room, count - len(picked))
                picked.extend((idx, have + j) for j in range(take))
                consumed[idx] = have + take
            return picked

        srcs = draw(plan.source, piece.src, consumed_src, piece.units.index)
        dsts = draw(plan.target, piece.dst, consumed_dst, piece.units.index)
        for (si, so), (di, do) in zip(srcs, dsts):
            out.append({"source": [si, so], "target": [di, do]})
    return tuple(out)


def audit_plan(plan: BijectionPlan, depth: int = 24) -> list[str]:
    """Check a plan against its own obligations on a finite window.

    Verifies that piece ranges tile both index axes (gaps only over zero
    entries), that the pieces touching each range exactly exhaust its
    cardinal sum on both sides, that no piece outruns its supply, and that
    both boundedness certificates hold for every window cutoff <= depth.
    Returns a list of problems; empty means the audit passed.
    """
    problems: list[str] = []
    pieces = list(plan.pieces(src_stop=depth, dst_stop=depth))

    def check_side(label: str, ranges_of, value_of):
        seen: dict[tuple[int, int], list[Cardinal]] = {}
        for piece in pieces:
            seen.setdefault(ranges_of(piece), []).append(piece.units)
        spans = sorted(seen)
        cursor = 0
        for lo, hi in spans:
            if lo > hi:
                problems.append(f"{label}: empty range ({lo},{hi})")
                continue
            for gap in range(cursor, min(lo, depth + 1)):
                if value_of(gap) != ZERO:
                    problems.append(f"{label}: index {gap} uncovered but nonzero")
            if lo < cursor:
                problems.append(f"{label}: range ({lo},{hi}) overlaps previous")
            cursor = max(cursor, hi + 1)
            if lo > depth:
                continue
            supply = card_sum(value_of(i) for i in range(lo, hi + 1))
            moved = card_sum(seen[(lo, hi)])
            if moved != supply:
                problems.append(
                    f"{label}: range ({lo},{hi}) moves {moved!r}, holds {supply!r}"
                )
        for gap in range(cursor, depth + 1):
            if value_of(gap) != ZERO:
                problems.append(f"{label}: index {gap} uncovered but nonzero")

    check_side("source", lambda piece: piece.src, plan.source.value)
    check_side("target", lambda piece: piece.dst, plan.target.value)

    for piece in pieces:
        src_supply = card_sum(
            plan.source.value(i) for i in range(piece.src[0], piece.src[1] + 1)
        )
        dst_supply = card_sum(
            plan.target.value(i) for i in range(piece.dst[0], piece.dst[1] + 1)
        )
        if piece.units > src_supply or piece.units > dst_supply:
            problems.append(f"piece {piece!r} exceeds its supply")

    for m in range(depth + 1):
        fwd = plan.forward_cert(m)
        bwd = plan.backward_cert(m)
        for piece in pieces:
            if piece.src[0] <= m and piece.dst[1] > fwd:
                problems.append(
                    f"forward certificate fails at M={m}: piece {piece!r}"
                )
            if piece.dst[0] <= m and piece.src[1] > bwd:
                problems.append(
                    f"backward certificate fails at M={m}: piece {piece!r}"
                )
    return problems
