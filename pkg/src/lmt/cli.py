"""The ``lmt`` command line.

Exit codes: 0 success, 1 a check failed, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import Any, Optional, Sequence

from . import textio as T
from .config import Config, load_config
from .errors import LmtError, ParseError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _text(arg: str) -> str:
    """A literal argument, or the contents of the file it names."""
    if arg == "-":
        return sys.stdin.read()
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read()
    return arg


def _emit(args, payload: dict, text: str) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
    else:
        print(text)


def _config(args) -> Config:
    try:
        return load_config(
            maxDepth=getattr(args, "max_depth", None),
            searchBudget=getattr(args, "budget", None),
            tol=getattr(args, "tol", None),
            qubitCap=getattr(args, "qubit_cap", None),
            seed=getattr(args, "seed", None),
            jobs=getattr(args, "jobs", None),
        )
    except ValueError as e:
        raise UsageError(str(e)) from None


# ---------------------------------------------------------------------------
# sig / term


def cmd_sig(args) -> int:
    sig = T.parse_signature(_text(args.file))
    _emit(args, T.signature_doc(sig),
          f"{len(sig.colours)} colours, {len(sig.generators)} generators\n{T.serialize_signature(sig)}")
    return EXIT_OK


def _verdict_payload(v) -> dict:
    return {"status": v.status, "depth": v.depth_used, "states": v.states,
            "witness": [{"equation": s.equation, "orientation": s.orientation} for s in (v.witness or ())]}


def _verdict_text(v) -> str:
    lines = [f"{v.status} (depth {v.depth_used}, {v.states} states)"]
    for s in v.witness or ():
        lines.append(f"  {s.orientation} {s.equation}")
    return "\n".join(lines)


def cmd_term(args) -> int:
    from .diagram import derivable, normalize, struct_equal

    cfg = _config(args)
    th = T.parse_theory(_text(args.theory))
    sig = th.signature
    if args.action == "normalize":
        t = T.parse_term(_text(args.terms[0]), sig)
        d = normalize(t, sig)
        out = T.serialize_term(d.to_term(), sig)
        _emit(args, {"sort": str(d.sort), "normal_form": out}, out)
        return EXIT_OK
    if len(args.terms) != 2:
        raise UsageError(f"term {args.action} takes two terms")
    t, s = (T.parse_term(_text(x), sig) for x in args.terms)
    if args.action == "eq":
        ok = struct_equal(t, s, sig)
        _emit(args, {"equal": ok}, "equal" if ok else "not equal")
        return EXIT_OK if ok else EXIT_FAIL
    depth = args.depth if args.depth is not None else cfg.maxDepth
    v = derivable(th, t, s, max_depth=depth, budget=cfg.searchBudget)
    _emit(args, _verdict_payload(v), _verdict_text(v))
    return EXIT_OK if v.proved else EXIT_FAIL


# ---------------------------------------------------------------------------
# layered


def cmd_layer(args) -> int:
    from . import layered as L
    from .diagram import normalize

    cfg = _config(args)
    sig = T.parse_layered_signature(_text(args.signature))
    terms = [T.parse_layered(_text(x), sig) for x in args.terms]
    if args.action == "sort":
        srt = L.layered_sort(sig, terms[0])
        _emit(args, {"sort": str(srt)}, str(srt))
        return EXIT_OK
    if args.action == "normalize":
        out = T.serialize_layered(L.layered_term(normalize(terms[0])), sig)
        _emit(args, {"normal_form": out}, out)
        return EXIT_OK
    if args.action == "decompose":
        t, ws = L.decompose_boxes(sig, terms[0])
        out = T.serialize_layered(t, sig)
        ok = all(w.replays() for w in ws)
        _emit(args, {"term": out, "witnesses": [len(w) for w in ws], "replayed": ok}, out)
        return EXIT_OK if ok else EXIT_FAIL
    if len(terms) != 2:
        raise UsageError("layer derive takes two terms")
    depth = args.depth if args.depth is not None else min(cfg.maxDepth, 16)
    v, _ = L.derive(sig, terms[0], terms[1], max_depth=depth, budget=cfg.searchBudget)
    _emit(args, _verdict_payload(v), _verdict_text(v))
    return EXIT_OK if v.proved else EXIT_FAIL


# ---------------------------------------------------------------------------
# zx


def _matrix_text(m) -> str:
    import numpy as np

    with np.printoptions(precision=6, suppress=True, linewidth=120):
        return f"{m.shape[0]}x{m.shape[1]}\n{m}"


def _complex(z) -> list:
    return [float(z.real), float(z.imag)]


def cmd_zx(args) -> int:
    from .zx import evaluate, proportionality

    cfg = _config(args)
    if args.action == "eval":
        if len(args.diagrams) != 1:
            raise UsageError("zx eval takes one diagram")
        m = evaluate(T.parse_zx(_text(args.diagrams[0])), cfg.qubitCap)
        _emit(args, {"shape": list(m.shape), "matrix": [[_complex(z) for z in row] for row in m]}, _matrix_text(m))
        return EXIT_OK
    if len(args.diagrams) != 2:
        raise UsageError("zx eq takes two diagrams")
    a, b = (evaluate(T.parse_zx(_text(x)), cfg.qubitCap) for x in args.diagrams)
    lam = proportionality(a, b, cfg.tol) if a.shape == b.shape else None
    if lam is None:
        _emit(args, {"proportional": False}, "not proportional")
        return EXIT_FAIL
    _emit(args, {"proportional": True, "scalar": _complex(lam)}, f"proportional, scalar {lam:.6g}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# mbqc


def _op(kind: str, rest: Sequence[str]) -> tuple:
    want = {"lc": 1, "pivot": 2, "rm": 1, "rename": 2}
    if kind not in want:
        raise UsageError(f"unknown rewrite {kind!r}; expected one of lc, pivot, rm, rename")
    if len(rest) != want[kind]:
        raise UsageError(f"{kind} takes {want[kind]} argument(s)")
    if kind == "rename":
        return ("rename", tuple(rest[0].split(",")), tuple(rest[1].split(",")))
    return (kind, *rest)


def cmd_mbqc(args) -> int:
    from .mbqc import apply_op, soundness_check, translate_D

    cfg = _config(args)
    g = T.parse_graph(_text(args.file))
    if args.action == "to-zx":
        out = T.serialize_zx(translate_D(g))
        _emit(args, {"diagram": out}, out)
        return EXIT_OK
    if args.action == "sound":
        if not args.args:
            raise UsageError("mbqc sound needs a rewrite")
        op = _op(args.args[0], args.args[1:])
        ok = soundness_check(g, op, tol=cfg.tol, cap=cfg.qubitCap)
        _emit(args, {"sound": ok, "op": list(op)}, "sound" if ok else "UNSOUND")
        return EXIT_OK if ok else EXIT_FAIL
    h = apply_op(g, _op(args.action, args.args))
    _emit(args, T.graph_doc(h), T.serialize_graph(h))
    return EXIT_OK


# ---------------------------------------------------------------------------
# channels


def _split_pairs(ch, copar: Optional[str]):
    from . import prob as P

    if not all(isinstance(y, tuple) and len(y) == 2 for y in ch.codomain):
        raise UsageError("the codomain must consist of pairs (x, y)")
    xs = tuple(dict.fromkeys(y[0] for y in ch.codomain))
    ys = tuple(dict.fromkeys(y[1] for y in ch.codomain))
    if copar:
        named = tuple(_json_or_str(v) for v in copar.split(","))
        if set(named) != set(xs):
            raise UsageError(f"--copar {copar} does not match the first components {list(xs)}")
        xs = named
    if P.product(xs, ys) != ch.codomain:
        raise UsageError("the codomain is not a product listed x-major")
    return P.CoparaChannel(xs, ys, ch)


def _json_or_str(v: str):
    try:
        return T._element_from_json(json.loads(v))
    except (json.JSONDecodeError, ParseError):
        return v


def cmd_chan(args) -> int:
    from . import prob as P

    if args.action == "compose":
        if len(args.files) != 2:
            raise UsageError("chan compose takes two channels")
        f, g = (T.parse_channel(_text(x)) for x in args.files)
        h = P.compose(f, g)
        _emit(args, T.channel_doc(h), T.serialize_channel(h))
        return EXIT_OK
    if len(args.files) != 1:
        raise UsageError(f"chan {args.action} takes one channel")
    c = _split_pairs(T.parse_channel(_text(args.files[0])), args.copar)
    if args.action == "condition":
        b = P.conditional_box(c)
        _emit(args, T.channel_doc(b.inner), T.serialize_channel(b.inner))
        return EXIT_OK
    ok = P.check_disintegration(c)
    _emit(args, {"disintegration": ok}, "disintegration holds" if ok else "disintegration FAILS")
    return EXIT_OK if ok else EXIT_FAIL


# ---------------------------------------------------------------------------
# ccs


def cmd_ccs(args) -> int:
    from . import ccs as C

    if args.action == "check":
        if args.size is None or args.size < 1 or args.names < 0:
            raise UsageError("ccs check needs --size N >= 1 and --names K >= 0")
        total = bad = 0
        first = None
        for p in C.enumerate_processes(args.size, C.default_names(args.names)):
            total += 1
            if not C.check_correspondence(p):
                bad += 1
                first = first or str(p)
        _emit(args, {"processes": total, "failures": bad, "first_failure": first},
              f"{total} processes, {bad} failures" + (f", first {first}" if first else ""))
        return EXIT_OK if bad == 0 else EXIT_FAIL
    if args.process is None:
        raise UsageError(f"ccs {args.action} takes a process")
    p = T.parse_process(_text(args.process))
    qs = C.reductions(p) if args.action == "red" else C.lts_tau_steps(p)
    out = sorted(str(q) for q in qs)
    _emit(args, {"steps": out}, "\n".join(out) if out else "(no steps)")
    return EXIT_OK


# ---------------------------------------------------------------------------
# suites


def cmd_suite(args) -> int:
    from .suites import SUITES, run_suite

    cfg = _config(args)
    names = list(SUITES) if args.name == "all" else [args.name]
    if any(n not in SUITES for n in names):
        raise UsageError(f"unknown suite {args.name!r}; expected one of {', '.join(SUITES)} or all")
    reports = [run_suite(n, cfg) for n in names]
    if args.json:
        print(json.dumps([r.as_dict() for r in reports], indent=2, default=str))
    else:
        for r in reports:
            print(r.line())
            for f in r.failures[:10]:
                print(f"  failed: {f}")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_FAIL


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--jobs", type=int, default=argparse.SUPPRESS, help="worker processes for suites")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--max-depth", type=int, default=argparse.SUPPRESS)
    common.add_argument("--budget", type=int, default=argparse.SUPPRESS, help="search budget (states)")
    common.add_argument("--tol", type=float, default=argparse.SUPPRESS)
    common.add_argument("--qubit-cap", type=int, default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="lmt", parents=[common],
                                description="String diagrams, layered theories, ZX, MBQC, channels and CCS.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("sig", parents=[common], help="check and print a signature file")
    s.add_argument("file")
    s.set_defaults(func=cmd_sig)

    s = sub.add_parser("term", parents=[common], help="normalize, compare or derive terms")
    s.add_argument("action", choices=["normalize", "eq", "derive"])
    s.add_argument("theory", help="theory JSON file")
    s.add_argument("terms", nargs="+", help="term text or a file holding it")
    s.add_argument("--depth", type=int)
    s.set_defaults(func=cmd_term)

    s = sub.add_parser("layer", parents=[common], help="layered terms")
    s.add_argument("action", choices=["sort", "normalize", "decompose", "derive"])
    s.add_argument("signature", help="layered signature JSON file")
    s.add_argument("terms", nargs="+")
    s.add_argument("--depth", type=int)
    s.set_defaults(func=cmd_layer)

    s = sub.add_parser("zx", parents=[common], help="evaluate or compare ZX diagrams")
    s.add_argument("action", choices=["eval", "eq"])
    s.add_argument("diagrams", nargs="+")
    s.set_defaults(func=cmd_zx)

    s = sub.add_parser("mbqc", parents=[common], help="rewrite and translate MBQC+LC graphs")
    s.add_argument("action", choices=["lc", "pivot", "rm", "rename", "to-zx", "sound"])
    s.add_argument("file")
    s.add_argument("args", nargs="*")
    s.set_defaults(func=cmd_mbqc)

    s = sub.add_parser("chan", parents=[common], help="finite channels")
    s.add_argument("action", choices=["compose", "condition", "check-disintegration"])
    s.add_argument("files", nargs="+")
    s.add_argument("--copar", help="comma-separated coparameter elements, in order")
    s.set_defaults(func=cmd_chan)

    s = sub.add_parser("ccs", parents=[common], help="CCS reductions and transitions")
    s.add_argument("action", choices=["red", "tau", "check"])
    s.add_argument("process", nargs="?")
    s.add_argument("--size", type=int)
    s.add_argument("--names", type=int, default=2)
    s.set_defaults(func=cmd_ccs)

    s = sub.add_parser("suite", parents=[common], help="run an acceptance suite")
    s.add_argument("name", help="suite name or 'all'")
    s.set_defaults(func=cmd_suite)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    if not hasattr(args, "json"):
        args.json = False
    try:
        return args.func(args)
    except (ParseError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except LmtError as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
