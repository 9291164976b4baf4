"""HTTP facade over the library: one endpoint per command verb.

Every endpoint decodes canonical JSON payloads, runs the pure library call
and re-encodes the verdict.  Domain errors map to two statuses: 422 for
anything wrong with the input (parse, validation, profile or declaration
mismatch, budget) and 409 when an operation does not apply to an otherwise
well-formed input, such as an isomorphism test on a horseshoe model.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import codec
from ..cardseq import regroup, seq_equiv
from ..errors import Error, InputError, NotApplicableError
from ..freealg import kth_root
from ..spacemodel import builtin_model, classify, iso_test
from ..topword import (
    FiniteBlock,
    TopWord,
    concat,
    eq_up_to,
    invert_word,
    phi_endo,
    project,
    reduce_loop,
    semidecide_neq,
)
from .schemas import (
    ClassifyRequest,
    EqRequest,
    EqResponse,
    HealthResponse,
    IsoRequest,
    LoopRequest,
    NeqRequest,
    NeqResponse,
    ProjectRequest,
    RegroupRequest,
    RootRequest,
    SeqPairRequest,
    SumRequest,
    SumResponse,
    WordPairRequest,
    WordRequest,
)


def _error_payload(exc: Error) -> dict:
    payload = {"type": type(exc).__name__, "message": str(exc)}
    violations = getattr(exc, "violations", None)
    if violations:
        payload["violations"] = codec.encode_violations(violations)
    return payload


def _finite_normal_form(w: TopWord):
    letters = []
    for b in w.blocks:
        if not isinstance(b, FiniteBlock):
            raise InputError("root extraction needs a finite word")
        letters.extend(b.letters)
    bound = max((letter.level for letter in letters), default=0)
    return project(w, bound)


def _word_from_pnf(p, profile) -> TopWord:
    letters = tuple(letter for s in p.syllables for letter in s.letters)
    blocks = (FiniteBlock(letters),) if letters else ()
    return TopWord(blocks, profile)


def create_app() -> FastAPI:
    app = FastAPI(title="topoprod", version="0.1.0")

    @app.exception_handler(Error)
    async def _domain_error(_request: Request, exc: Error):
        status = 409 if isinstance(exc, NotApplicableError) else 422
        return JSONResponse(status_code=status, content={"error": _error_payload(exc)})

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        return HealthResponse(status="ok")

    @app.get("/examples/{name}")
    def examples(name: str) -> dict:
        return codec.encode_model(builtin_model(name))

    @app.post("/classify")
    def do_classify(req: ClassifyRequest) -> dict:
        return codec.encode_classification(classify(codec.decode_model(req.model)))

    @app.post("/iso")
    def do_iso(req: IsoRequest) -> dict:
        verdict = iso_test(codec.decode_model(req.left), codec.decode_model(req.right))
        return codec.encode_iso_verdict(verdict)

    @app.post("/word/project")
    def word_project(req: ProjectRequest) -> dict:
        return codec.encode_pnf(project(codec.decode_word(req.word), req.n))

    @app.post("/word/eq", response_model=EqResponse)
    def word_eq(req: EqRequest) -> EqResponse:
        u, v = codec.decode_word(req.left), codec.decode_word(req.right)
        return EqResponse(equal=eq_up_to(u, v, req.n), level=req.n)

    @app.post("/word/neq", response_model=NeqResponse)
    def word_neq(req: NeqRequest) -> NeqResponse:
        u, v = codec.decode_word(req.left), codec.decode_word(req.right)
        level = semidecide_neq(u, v, req.nMax)
        return NeqResponse(separated=level is not None, level=level, checkedUpTo=req.nMax)

    @app.post("/word/concat")
    def word_concat(req: WordPairRequest) -> dict:
        u, v = codec.decode_word(req.left), codec.decode_word(req.right)
        return codec.encode_word(concat(u, v))

    @app.post("/word/invert")
    def word_invert(req: WordRequest) -> dict:
        return codec.encode_word(invert_word(codec.decode_word(req.word)))

    @app.post("/word/phi")
    def word_phi(req: WordRequest) -> dict:
        return codec.encode_word(phi_endo(codec.decode_word(req.word)))

    @app.post("/word/root")
    def word_root(req: RootRequest) -> dict:
        w = codec.decode_word(req.word)
        pnf = _finite_normal_form(w)
        if pnf.is_identity:
            raise InputError("the identity word has roots of every degree")
        root = kth_root(pnf, req.k)
        if root is None:
            return {"hasRoot": False, "root": None}
        return {"hasRoot": True, "root": codec.encode_word(_word_from_pnf(root, w.profile))}

    @app.post("/word/reduce-loop")
    def word_reduce_loop(req: LoopRequest) -> dict:
        return codec.encode_word(reduce_loop(codec.decode_loop(req.loop)))

    @app.post("/seq/equiv")
    def seq_equiv_endpoint(req: SeqPairRequest) -> dict:
        verdict = seq_equiv(codec.decode_seq(req.left), codec.decode_seq(req.right))
        return codec.encode_seq_verdict(verdict)

    @app.post("/seq/regroup")
    def seq_regroup(req: RegroupRequest) -> dict:
        s = codec.decode_seq(req.seq)
        g = codec.decode_grouping(req.grouping)
        return codec.encode_seq(regroup(s, g))

    @app.post("/seq/sum", response_model=SumResponse)
    def seq_sum(req: SumRequest) -> SumResponse:
        s = codec.decode_seq(req.seq)
        return SumResponse(m=req.m, sum=codec.encode_card(s.partial_sum(req.m)))

    return app
