"""Canonical JSON wire formats for every artifact the tools exchange.

Encoders emit plain JSON-ready payloads; dumps() fixes one canonical text
form (two-space indent, sorted keys, trailing newline) so identical values
always serialize to identical bytes.  Decoders validate shape and raise
ParseError with a location hint; semantic validation stays with the owning
module.
"""

from __future__ import annotations

import json
from typing import Union

from .affine import Affine
from .cardseq import (
    ALEPH_OMEGA,
    BackAndForth,
    BijectionPlan,
    CardSeq,
    Cardinal,
    ConstantTail,
    Grouping,
    IncreasingAlephsTail,
    PeriodicTail,
    Piece,
    SegmentPairing,
    SeqVerdict,
    UnitPairing,
    ZeroTail,
    aleph,
    fin,
)
from .errors import ParseError
from .freealg import FreeWord, Letter, ProductNormalForm
from .spacemodel import (
    APPROACHES_BASE,
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
    z_profile,
)


def dumps(payload) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not valid JSON: {exc}") from None


def _expect(j, kind, what: str):
    if not isinstance(j, kind) or isinstance(j, bool) and kind is int:
        raise ParseError(f"{what} has the wrong shape")
    return j


def _field(j: dict, key: str, what: str):
    if key not in j:
        raise ParseError(f"{what} is missing the {key!r} field")
    return j[key]


def _nat(j, what: str) -> int:
    if not isinstance(j, int) or isinstance(j, bool) or j < 0:
        raise ParseError(f"{what} must be a natural number")
    return j


def _int(j, what: str) -> int:
    if not isinstance(j, int) or isinstance(j, bool):
        raise ParseError(f"{what} must be an integer")
    return j


# ---------------------------------------------------------------------------
# cardinals and sequences


def encode_card(c: Cardinal):
    if c == ALEPH_OMEGA:
        return "alephOmega"
    if c.is_finite:
        return {"fin": c.index}
    return {"aleph": c.index}


def decode_card(j) -> Cardinal:
    if j == "alephOmega":
        return ALEPH_OMEGA
    if isinstance(j, dict) and set(j) == {"fin"}:
        return fin(_nat(j["fin"], "fin"))
    if isinstance(j, dict) and set(j) == {"aleph"}:
        return aleph(_nat(j["aleph"], "aleph"))
    raise ParseError(f"not a cardinal: {j!r}")


def encode_affine(f: Affine) -> dict:
    return {"a": f.a, "b": f.b}


def decode_affine(j, what: str = "affine schema") -> Affine:
    _expect(j, dict, what)
    return Affine(_int(_field(j, "a", what), f"{what}.a"), _int(_field(j, "b", what), f"{what}.b"))


def encode_tail(t) -> dict:
    if isinstance(t, ZeroTail):
        return {"kind": "zero"}
    if isinstance(t, ConstantTail):
        return {"kind": "constant", "value": encode_card(t.constant)}
    if isinstance(t, PeriodicTail):
        return {"kind": "periodic", "values": [encode_card(v) for v in t.values]}
    if isinstance(t, IncreasingAlephsTail):
        return {"kind": "increasingAlephs", "index": encode_affine(t.index)}
    raise ParseError(f"unknown tail {t!r}")


def decode_tail(j):
    _expect(j, dict, "tail")
    kind = _field(j, "kind", "tail")
    if kind == "zero":
        return ZeroTail()
    if kind == "constant":
        return ConstantTail(decode_card(_field(j, "value", "constant tail")))
    if kind == "periodic":
        values = _expect(_field(j, "values", "periodic tail"), list, "periodic tail values")
        return PeriodicTail(tuple(decode_card(v) for v in values))
    if kind == "increasingAlephs":
        return IncreasingAlephsTail(decode_affine(_field(j, "index", "aleph tail"), "aleph tail index"))
    raise ParseError(f"unknown tail kind {kind!r}")


def encode_seq(s: CardSeq) -> dict:
    return {"prefix": [encode_card(v) for v in s.prefix], "tail": encode_tail(s.tail)}


def decode_seq(j) -> CardSeq:
    _expect(j, dict, "cardinal sequence")
    prefix = _expect(_field(j, "prefix", "cardinal sequence"), list, "sequence prefix")
    return CardSeq(tuple(decode_card(v) for v in prefix), decode_tail(_field(j, "tail", "cardinal sequence")))


# ---------------------------------------------------------------------------
# words and normal forms


def _encode_gen(g):
    return encode_affine(g) if isinstance(g, Affine) else g


def _decode_gen(j, what: str):
    if isinstance(j, dict):
        return decode_affine(j, what)
    if isinstance(j, str) and j:
        return j
    raise ParseError(f"{what} must be an affine schema or a token")


def _encode_class(c: ClassRule) -> dict:
    return {"level": encode_affine(c.level), "gen": _encode_gen(c.gen), "exp": encode_affine(c.exp)}


def _decode_class(j, what: str) -> ClassRule:
    _expect(j, dict, what)
    return ClassRule(
        decode_affine(_field(j, "level", what), f"{what}.level"),
        _decode_gen(_field(j, "gen", what), f"{what}.gen"),
        decode_affine(_field(j, "exp", what), f"{what}.exp"),
    )


def _encode_letter_triple(letter: Letter) -> list:
    return [letter.level, letter.gen, letter.exp]


def _decode_letter_triple(j, what: str) -> Letter:
    if not isinstance(j, list) or len(j) != 3:
        raise ParseError(f"{what} must be a [level, gen, exp] triple")
    level = _nat(j[0], f"{what} level")
    gen = j[1]
    if not (isinstance(gen, str) and gen) and not (isinstance(gen, int) and not isinstance(gen, bool) and gen >= 0):
        raise ParseError(f"{what} generator must be a natural number or a token")
    return Letter(level, gen, _int(j[2], f"{what} exponent"))


def encode_block(b) -> dict:
    if isinstance(b, FiniteBlock):
        return {"kind": "finite", "letters": [_encode_letter_triple(l) for l in b.letters]}
    kind = "omega" if isinstance(b, OmegaBlock) else "omegaStar"
    if len(b.classes) == 1:
        return {"kind": kind, **_encode_class(b.classes[0])}
    return {"kind": kind, "classes": [_encode_class(c) for c in b.classes]}


def decode_block(j, what: str = "block"):
    _expect(j, dict, what)
    kind = _field(j, "kind", what)
    if kind == "finite":
        letters = _expect(_field(j, "letters", what), list, f"{what} letters")
        return FiniteBlock(tuple(_decode_letter_triple(l, f"{what} letter") for l in letters))
    if kind not in ("omega", "omegaStar"):
        raise ParseError(f"unknown block kind {kind!r}")
    ctor = OmegaBlock if kind == "omega" else OmegaStarBlock
    if "classes" in j:
        classes = _expect(j["classes"], list, f"{what} classes")
        return ctor(tuple(_decode_class(c, f"{what} class") for c in classes))
    return ctor((_decode_class(j, what),))


def encode_word(w: TopWord) -> dict:
    return {"profile": encode_seq(w.profile), "blocks": [encode_block(b) for b in w.blocks]}


def decode_word(j) -> TopWord:
    _expect(j, dict, "word")
    profile = _field(j, "profile", "word")
    profile = z_profile() if profile == "Z" else decode_seq(profile)
    blocks = _expect(_field(j, "blocks", "word"), list, "word blocks")
    return TopWord(tuple(decode_block(b) for b in blocks), profile)


def encode_pnf(p: ProductNormalForm) -> dict:
    return {
        "levelBound": p.level_bound,
        "syllables": [
            {"level": s.level, "letters": [[l.gen, l.exp] for l in s.letters]}
            for s in p.syllables
        ],
    }


def decode_pnf(j) -> ProductNormalForm:
    _expect(j, dict, "normal form")
    syllables = []
    for sj in _expect(_field(j, "syllables", "normal form"), list, "syllables"):
        _expect(sj, dict, "syllable")
        level = _nat(_field(sj, "level", "syllable"), "syllable level")
        letters = []
        for lj in _expect(_field(sj, "letters", "syllable"), list, "syllable letters"):
            if not isinstance(lj, list) or len(lj) != 2:
                raise ParseError("syllable letters must be [gen, exp] pairs")
            gen = lj[0]
            if not (isinstance(gen, str) and gen) and not (
                isinstance(gen, int) and not isinstance(gen, bool) and gen >= 0
            ):
                raise ParseError("syllable generator must be a natural number or a token")
            letters.append(Letter(level, gen, _int(lj[1], "syllable exponent")))
        syllables.append(FreeWord(tuple(letters)))
    return ProductNormalForm(tuple(syllables), _nat(_field(j, "levelBound", "normal form"), "levelBound"))


# ---------------------------------------------------------------------------
# loops


def encode_loop(loop: CombinatorialLoop) -> dict:
    blocks = []
    for b in loop.blocks:
        if isinstance(b, FiniteLoopBlock):
            blocks.append(
                {
                    "kind": "finite",
                    "records": [
                        {"point": r.point, "crosses": r.crosses, "sign": r.sign}
                        for r in b.records
                    ],
                }
            )
            continue
        kind = "omega" if isinstance(b, OmegaLoopBlock) else "omegaStar"
        classes = [
            {
                "level": encode_affine(c.level),
                "gen": _encode_gen(c.gen),
                "crosses": c.crosses,
                "sign": c.sign,
            }
            for c in b.classes
        ]
        if len(classes) == 1:
            blocks.append({"kind": kind, **classes[0]})
        else:
            blocks.append({"kind": kind, "classes": classes})
    return {
        "pointLevels": {p: level for p, level in sorted(loop.point_levels.items())},
        "profile": encode_seq(loop.profile),
        "blocks": blocks,
    }


def _decode_loop_class(j, what: str) -> LoopClassRule:
    _expect(j, dict, what)
    sign = _int(_field(j, "sign", what), f"{what}.sign")
    crosses = _field(j, "crosses", what)
    if not isinstance(crosses, bool):
        raise ParseError(f"{what}.crosses must be a boolean")
    return LoopClassRule(
        decode_affine(_field(j, "level", what), f"{what}.level"),
        _decode_gen(_field(j, "gen", what), f"{what}.gen"),
        crosses,
        sign,
    )


def decode_loop(j) -> CombinatorialLoop:
    from .spacemodel import builtin_model, point_levels

    _expect(j, dict, "loop")
    if "pointLevels" in j:
        raw = _expect(j["pointLevels"], dict, "pointLevels")
        levels = {k: _nat(v, f"level of point {k!r}") for k, v in raw.items()}
    elif "model" in j:
        model = j["model"]
        model = builtin_model(model) if isinstance(model, str) else decode_model(model)
        levels = point_levels(model)
    else:
        levels = {}
    blocks = []
    for bj in _expect(_field(j, "blocks", "loop"), list, "loop blocks"):
        _expect(bj, dict, "loop block")
        kind = _field(bj, "kind", "loop block")
        if kind == "finite":
            records = []
            for rj in _expect(_field(bj, "records", "loop block"), list, "loop records"):
                _expect(rj, dict, "loop record")
                crosses = _field(rj, "crosses", "loop record")
                if not isinstance(crosses, bool):
                    raise ParseError("loop record crosses must be a boolean")
                records.append(
                    LoopRecord(
                        _expect(_field(rj, "point", "loop record"), str, "loop record point"),
                        crosses,
                        _int(_field(rj, "sign", "loop record"), "loop record sign"),
                    )
                )
            blocks.append(FiniteLoopBlock(tuple(records)))
            continue
        if kind not in ("omega", "omegaStar"):
            raise ParseError(f"unknown loop block kind {kind!r}")
        ctor = OmegaLoopBlock if kind == "omega" else OmegaStarLoopBlock
        if "classes" in bj:
            classes = _expect(bj["classes"], list, "loop classes")
            blocks.append(ctor(tuple(_decode_loop_class(c, "loop class") for c in classes)))
        else:
            blocks.append(ctor((_decode_loop_class(bj, "loop block"),)))
    return CombinatorialLoop(levels, tuple(blocks), decode_seq(_field(j, "profile", "loop")))


# ---------------------------------------------------------------------------
# space models


def encode_model(m: SpaceModel) -> dict:
    families = []
    for fam in m.pair_families:
        fj = {
            "xLevel": encode_affine(fam.x_level),
            "yLevel": encode_affine(fam.y_level),
            "sameComponent": fam.same_component,
            "h": {"kind": "constant", "k": fam.h.k}
            if isinstance(fam.h, ConstantH)
            else {"kind": "unbounded"},
        }
        if fam.component is not None:
            fj["component"] = fam.component
        families.append(fj)
    return {
        "annuli": encode_seq(m.annuli),
        "points": [{"id": p.id, "level": p.level} for p in m.points],
        "components": [
            {"id": c.id, "members": list(c.members), "maxLevel": c.max_level}
            for c in m.components
        ],
        "pairFamilies": families,
    }


def decode_model(j) -> SpaceModel:
    _expect(j, dict, "model")
    points = []
    for pj in _expect(j.get("points", []), list, "model points"):
        _expect(pj, dict, "point")
        points.append(
            NamedPoint(
                _expect(_field(pj, "id", "point"), str, "point id"),
                _nat(_field(pj, "level", "point"), "point level"),
            )
        )
    components = []
    for cj in _expect(j.get("components", []), list, "model components"):
        _expect(cj, dict, "component")
        max_level = _field(cj, "maxLevel", "component")
        if max_level != APPROACHES_BASE:
            max_level = _nat(max_level, "component maxLevel")
        members = _expect(_field(cj, "members", "component"), list, "component members")
        components.append(
            Component(
                _expect(_field(cj, "id", "component"), str, "component id"),
                tuple(_expect(x, str, "component member") for x in members),
                max_level,
            )
        )
    families = []
    for fj in _expect(j.get("pairFamilies", []), list, "pairFamilies"):
        _expect(fj, dict, "pair family")
        hj = _expect(_field(fj, "h", "pair family"), dict, "pair family h")
        kind = _field(hj, "kind", "pair family h")
        if kind == "constant":
            h = ConstantH(_nat(_field(hj, "k", "constant h"), "h bound"))
        elif kind == "unbounded":
            h = UnboundedH()
        else:
            raise ParseError(f"unknown connectivity kind {kind!r}")
        same = _field(fj, "sameComponent", "pair family")
        if not isinstance(same, bool):
            raise ParseError("sameComponent must be a boolean")
        component = fj.get("component")
        if component is not None and not isinstance(component, str):
            raise ParseError("pair family component must be a string label")
        families.append(
            PairFamily(
                decode_affine(_field(fj, "xLevel", "pair family"), "xLevel"),
                decode_affine(_field(fj, "yLevel", "pair family"), "yLevel"),
                same,
                h,
                component,
            )
        )
    return SpaceModel(
        decode_seq(_field(j, "annuli", "model")),
        tuple(points),
        tuple(components),
        tuple(families),
    )


# ---------------------------------------------------------------------------
# groupings, plans, verdicts


def encode_grouping(g: Grouping) -> dict:
    return {"head": list(g.head), "tailBlock": g.tail_block}


def decode_grouping(j) -> Grouping:
    _expect(j, dict, "grouping")
    head = _expect(_field(j, "head", "grouping"), list, "grouping head")
    return Grouping(
        tuple(_nat(x, "grouping head entry") for x in head),
        _nat(_field(j, "tailBlock", "grouping"), "grouping tailBlock"),
    )


def encode_piece(p: Piece) -> dict:
    return {
        "source": list(p.src),
        "target": list(p.dst),
        "units": encode_card(p.units),
    }


def _encode_rule(rule) -> Union[dict, None]:
    if rule is None:
        return None
    if isinstance(rule, UnitPairing):
        return {"kind": "unitPairing", "sourceFrom": rule.s_from, "targetFrom": rule.t_from}
    if isinstance(rule, SegmentPairing):
        return {
            "kind": "segmentPairing",
            "sourceFrom": rule.s_from,
            "sourceStep": rule.s_step,
            "targetFrom": rule.t_from,
            "targetStep": rule.t_step,
            "units": encode_card(rule.units),
        }
    if isinstance(rule, BackAndForth):
        return {"kind": "backAndForth", "sourceFrom": rule.s_from, "targetFrom": rule.t_from}
    raise ParseError(f"unknown pairing rule {rule!r}")


def encode_plan(plan: BijectionPlan) -> dict:
    return {
        "case": plan.case,
        "source": encode_seq(plan.source),
        "target": encode_seq(plan.target),
        "head": [encode_piece(p) for p in plan.head],
        "rule": _encode_rule(plan.rule),
        "forwardCert": encode_affine(plan.forward_cert),
        "backwardCert": encode_affine(plan.backward_cert),
    }


def _encode_json_values(value):
    """Recursively encode Cardinal values hiding inside plain containers."""

    if isinstance(value, Cardinal):
        return encode_card(value)
    if isinstance(value, dict):
        return {k: _encode_json_values(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode_json_values(v) for v in value]
    return value


def encode_seq_verdict(v: SeqVerdict) -> dict:
    return {
        "equivalent": v.equivalent,
        "failingCondition": v.failing_condition,
        "witness": _encode_json_values(v.witness),
        "plan": encode_plan(v.plan) if v.plan is not None else None,
    }


def encode_realized(rows) -> list:
    return [_encode_json_values(r) for r in rows]


def encode_witness(w: HorseshoeWitness) -> dict:
    return {
        "familyIndex": w.family_index,
        "neighborhoodIndex": w.neighborhood_index,
        "xLevel": encode_affine(w.x_level),
        "yLevel": encode_affine(w.y_level),
        "dichotomy": w.dichotomy,
    }


def encode_horseshoe_verdict(v: HorseshoeVerdict) -> dict:
    return {
        "isHorseshoe": v.is_horseshoe,
        "witness": encode_witness(v.witness) if v.witness is not None else None,
    }


def encode_classification(c: Classification) -> dict:
    out: dict = {"type": c.kind, "groupNote": c.group_note}
    if c.witness is not None:
        out["witness"] = encode_witness(c.witness)
    if c.section is not None:
        out["section"] = [[cid, level] for cid, level in c.section]
    if c.invariant is not None:
        out["invariant"] = encode_seq(c.invariant)
    return out


def encode_iso_verdict(v: IsoVerdict) -> dict:
    return {
        "isomorphic": v.isomorphic,
        "leftInvariant": encode_seq(v.left_invariant),
        "rightInvariant": encode_seq(v.right_invariant),
        "evidence": encode_seq_verdict(v.evidence),
    }


def encode_violations(violations) -> list:
    return [
        {"field": v.field, "rule": v.rule, "message": v.message}
        for v in violations
    ]
