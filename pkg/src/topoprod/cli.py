"""Command-line front end; a thin client over the HTTP service.

Each subcommand reads its JSON artifacts from files, sends one request to
the service (an in-process instance by default, a remote one with
--server) and prints a deterministic report on standard output.  Human
diagnostics go to standard error.  Exit codes: 0 when a verdict was
computed, 2 for any input problem, 3 when the operation does not apply.
"""

from __future__ import annotations

import argparse
import sys

import httpx

from . import codec
from .errors import Error


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topoprod",
        description="classification and word calculus for level-graded spaces",
    )
    parser.add_argument("--nmax", type=int, default=32, help="default projection bound")
    parser.add_argument(
        "--json",
        action="store_true",
        default=True,
        help="emit JSON reports (always on; accepted for scripting symmetry)",
    )
    parser.add_argument("--server", default=None, help="URL of a running service; in-process by default")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="classify a space model")
    p.add_argument("model", help="model JSON file")

    p = sub.add_parser("iso", help="test two models for suspension isomorphism")
    p.add_argument("left")
    p.add_argument("right")

    word = sub.add_parser("word", help="word calculus").add_subparsers(dest="word_command", required=True)
    p = word.add_parser("project", help="project onto the head free product")
    p.add_argument("n", type=int)
    p.add_argument("word", help="word JSON file")
    p = word.add_parser("eq", help="test projection equality at one level")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("n", type=int, nargs="?", default=None)
    p = word.add_parser("neq", help="search for a separating level")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("bound", type=int, nargs="?", default=None)
    p = word.add_parser("concat", help="concatenate two words")
    p.add_argument("left")
    p.add_argument("right")
    p = word.add_parser("invert", help="invert a word")
    p.add_argument("word")
    p = word.add_parser("phi", help="apply the pair-doubling endomorphism")
    p.add_argument("word")
    p = word.add_parser("root", help="extract a k-th root of a finite word")
    p.add_argument("k", type=int)
    p.add_argument("word")
    p = word.add_parser("reduce-loop", help="reduce a combinatorial loop to a word")
    p.add_argument("loop")

    seq = sub.add_parser("seq", help="cardinal sequences").add_subparsers(dest="seq_command", required=True)
    p = seq.add_parser("equiv", help="decide sequence equivalence")
    p.add_argument("left")
    p.add_argument("right")
    p = seq.add_parser("regroup", help="regroup a sequence by block sums")
    p.add_argument("seq")
    p.add_argument("grouping", help="grouping JSON file")
    p = seq.add_parser("sum", help="partial sum S(M) of entries 0..M")
    p.add_argument("m", type=int)
    p.add_argument("seq")

    p = sub.add_parser("examples", help="emit a builtin model")
    p.add_argument("name")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8080)

    return parser


def _read_json(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise Error(f"cannot read {path}: {exc}") from None
    return codec.loads(text)


def _request(args: argparse.Namespace):
    """Build (method, path, body) for the parsed command."""

    if args.command == "classify":
        return "POST", "/classify", {"model": _read_json(args.model)}
    if args.command == "iso":
        return "POST", "/iso", {"left": _read_json(args.left), "right": _read_json(args.right)}
    if args.command == "examples":
        return "GET", f"/examples/{args.name}", None
    if args.command == "word":
        sub = args.word_command
        if sub == "project":
            return "POST", "/word/project", {"word": _read_json(args.word), "n": args.n}
        if sub == "eq":
            n = args.nmax if args.n is None else args.n
            return "POST", "/word/eq", {"left": _read_json(args.left), "right": _read_json(args.right), "n": n}
        if sub == "neq":
            pair = {"left": _read_json(args.left), "right": _read_json(args.right)}
            bound = args.nmax if args.bound is None else args.bound
            return "POST", "/word/neq", {**pair, "nMax": bound}
        if sub == "concat":
            return "POST", "/word/concat", {"left": _read_json(args.left), "right": _read_json(args.right)}
        if sub == "invert":
            return "POST", "/word/invert", {"word": _read_json(args.word)}
        if sub == "phi":
            return "POST", "/word/phi", {"word": _read_json(args.word)}
        if sub == "root":
            return "POST", "/word/root", {"word": _read_json(args.word), "k": args.k}
        if sub == "reduce-loop":
            return "POST", "/word/reduce-loop", {"loop": _read_json(args.loop)}
    if args.command == "seq":
        sub = args.seq_command
        if sub == "equiv":
            return "POST", "/seq/equiv", {"left": _read_json(args.left), "right": _read_json(args.right)}
        if sub == "regroup":
            return "POST", "/seq/regroup", {"seq": _read_json(args.seq), "grouping": _read_json(args.grouping)}
        if sub == "sum":
            return "POST", "/seq/sum", {"seq": _read_json(args.seq), "m": args.m}
    raise Error(f"unhandled command {args.command!r}")


def _diagnostics(payload) -> list:
    if isinstance(payload, dict) and "error" in payload:
        err = payload["error"]
        lines = [err.get("message", "error")]
        for v in err.get("violations") or []:
            lines.append(f"{v['field']}/{v['rule']}: {v['message']}")
        return lines
    if isinstance(payload, dict) and "detail" in payload:
        detail = payload["detail"]
        if isinstance(detail, list):
            lines = []
            for item in detail:
                loc = ".".join(str(x) for x in item.get("loc", ())) if isinstance(item, dict) else ""
                msg = item.get("msg", "invalid request") if isinstance(item, dict) else str(item)
                lines.append(f"{loc}: {msg}" if loc else msg)
            return lines
        return [str(detail)]
    return []


def _emit(report: dict, diagnostics: list) -> int:
    sys.stdout.write(codec.dumps(report))
    for line in diagnostics:
        print(line, file=sys.stderr)
    return report["exit"]


def _perform(args: argparse.Namespace, method: str, path: str, body) -> httpx.Response:
    if args.server:
        with httpx.Client(base_url=args.server, timeout=60.0) as client:
            return client.request(method, path, json=body)

    import asyncio

    from .api.app import create_app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=create_app())
        async with httpx.AsyncClient(transport=transport, base_url="http://topoprod.internal") as client:
            return await client.request(method, path, json=body)

    return asyncio.run(go())


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    args = _build_parser().parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .api.app import create_app

        uvicorn.run(create_app(), host=args.host, port=args.port)
        return 0

    try:
        method, path, body = _request(args)
    except Error as exc:
        report = {
            "command": argv,
            "verdict": {"error": {"type": type(exc).__name__, "message": str(exc)}},
            "diagnostics": [str(exc)],
            "exit": 2,
        }
        return _emit(report, [str(exc)])

    response = _perform(args, method, path, body)
    try:
        payload = response.json()
    except ValueError:
        payload = {"error": {"type": "ServiceError", "message": response.text or "empty response"}}

    if response.status_code == 200:
        code, diagnostics = 0, []
    elif response.status_code == 409:
        code, diagnostics = 3, _diagnostics(payload)
    else:
        code, diagnostics = 2, _diagnostics(payload) or [f"service returned status {response.status_code}"]

    if args.command == "examples" and code == 0:
        sys.stdout.write(codec.dumps(payload))
        return 0

    report = {"command": argv, "verdict": payload, "diagnostics": diagnostics, "exit": code}
    return _emit(report, diagnostics)


def entrypoint() -> None:
    raise SystemExit(main())
