"""Executable acceptance suites.

Each suite turns one acceptance criterion into a list of named items, runs
them (optionally across a process pool) and merges the outcomes in input
order, so a report depends only on the configuration and its seed.
"""

from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .config import Config

SUITES = (
    "structural",
    "theories",
    "layered-witnesses",
    "zx-soundness",
    "mbqc-brute",
    "pivot",
    "prob",
    "ccs",
    "roundtrip",
)

# the MBQC translation of a five-vertex graph can need a dozen wires
MBQC_SUITE_CAP = 16


@dataclass
class SuiteReport:
    name: str
    passed: int = 0
    failed: int = 0
    seconds: float = 0.0
    failures: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def add(self, label: str, ok: bool) -> None:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if len(self.failures) < 50:
                self.failures.append(label)

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{verdict} {self.name}: {self.passed} passed, {self.failed} failed ({self.seconds:.1f} s)"

    def as_dict(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "passed": self.passed, "failed": self.failed,
                "seconds": round(self.seconds, 3), "failures": self.failures, "details": self.details}


def _map(fn: Callable, items: Sequence, jobs: int) -> list:
    if jobs <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * jobs))))


# ---------------------------------------------------------------------------
# structural congruence against the syntax-tree oracle


def structural_terms(max_leaves: int = 5, max_generators: int = 4):
    """Every term tree with at most ``max_leaves`` leaves and ``max_generators``
    generator occurrences over colours a, b and generators f: a→b,
    m: a b→a, e: b→()."""
    from .signature import EMPTY, Gen, Generator, Id, Seq, Tensor, generators_in

    f = Generator("f", ("a",), ("b",))
    m = Generator("m", ("a", "b"), ("a",))
    e = Generator("e", ("b",), ())
    by = {1: [Gen(f), Gen(m), Gen(e), Id("a"), Id("b"), EMPTY]}
    ngen = {}

    def count(t):
        k = ngen.get(id(t))
        if k is None:
            k = ngen[id(t)] = len(generators_in(t))
        return k

    for n in range(2, max_leaves + 1):
        out = []
        for i in range(1, n):
            for left in by[i]:
                for right in by[n - i]:
                    if count(left) + count(right) > max_generators:
                        continue
                    out.append(Tensor(left, right))
                    if left.cod == right.dom:
                        out.append(Seq(left, right))
        by[n] = out
    return [t for n in sorted(by) for t in by[n]]


def suite_structural(cfg: Config, max_leaves: int = 5) -> SuiteReport:
    from collections import defaultdict

    from .diagram import normalize
    from .oracle import oracle_classes, reset

    rep = SuiteReport("structural")
    terms = structural_terms(max_leaves)
    reset()
    cls = oracle_classes(terms)
    nf = {t: normalize(t) for t in terms}
    by_class, by_form = defaultdict(set), defaultdict(set)
    for t in terms:
        by_class[cls[t]].add(nf[t])
        by_form[nf[t]].add(cls[t])
    for k, forms in by_class.items():
        rep.add(f"oracle class {k} splits into {len(forms)} canonical forms", len(forms) == 1)
    for d, ks in by_form.items():
        rep.add(f"canonical form {d} merges {len(ks)} oracle classes", len(ks) == 1)
    rep.details = {"terms": len(terms), "classes": len(by_class), "max_leaves": max_leaves}
    reset()
    return rep


# ---------------------------------------------------------------------------
# built-in theories


def suite_theories(cfg: Config) -> SuiteReport:
    from .diagram import derivable
    from .signature import Gen, Id, seq, tensor
    from .theories import builtin_theory, check_eckmann_hilton, copy, delete, mult, unit

    rep = SuiteReport("theories")
    budget = cfg.searchBudget
    for c in ("x",):
        i = Id(c)
        mon = builtin_theory("Monoid", [c])
        m, u = Gen(mult(c)), Gen(unit(c))
        cases = [
            ("unit-left", mon, seq(tensor(u, i), m), i),
            ("unit-right", mon, seq(tensor(i, u), m), i),
            ("assoc", mon, seq(tensor(m, i), m), seq(tensor(i, m), m)),
        ]
        com = builtin_theory("Comonoid", [c])
        d, e = Gen(copy(c)), Gen(delete(c))
        cases += [
            ("counit-left", com, seq(d, tensor(e, i)), i),
            ("counit-right", com, seq(d, tensor(i, e)), i),
            ("coassoc", com, seq(d, tensor(d, i)), seq(d, tensor(i, d))),
        ]
        for name, th, lhs, rhs in cases:
            v = derivable(th, lhs, rhs, max_depth=min(3, cfg.maxDepth), budget=budget)
            rep.add(name, v.status == "Proved")
        uc = builtin_theory("UniformComonoids", [c])
        v = check_eckmann_hilton(uc, c, max_depth=min(8, cfg.maxDepth), budget=budget)
        rep.add("cocommutativity", v.status == "Proved")
        rep.details["cocommutativity_depth"] = v.depth_used
    return rep


# ---------------------------------------------------------------------------
# layered witnesses


def demo_layered_signature():
    """Two free symmetric layers w (colour a) and t (colour b) with a
    translation f sending x, y, m to X, Y, M."""
    from .diagram import make_theory
    from .layered import Translation, make_layer_graph, make_layered_signature
    from .signature import Gen, Generator, make_signature
    from .theories import symmetric_closure

    def free(cols, gens):
        return symmetric_closure(make_theory(make_signature(cols, gens)))

    x, y, m = Generator("x", ("a",), ("a",)), Generator("y", ("a",), ("a",)), Generator("m", ("a", "a"), ("a",))
    X, Y, M = Generator("X", ("b",), ("b",)), Generator("Y", ("b",), ("b",)), Generator("M", ("b", "b"), ("b",))
    lg = make_layer_graph(["w", "t"], [("f", "w", "t")])
    tr = Translation({"a": ("b",)}, {x: Gen(X), y: Gen(Y), m: Gen(M)})
    return make_layered_signature(lg, {"w": free(("a",), (x, y, m)), "t": free(("b",), (X, Y, M))}, {"f": tr})


def _demo_composite_signature():
    from .diagram import make_theory
    from .layered import Translation, make_layer_graph, make_layered_signature
    from .signature import Gen, Generator, make_signature
    from .theories import symmetric_closure

    def free(cols, gens):
        return symmetric_closure(make_theory(make_signature(cols, gens)))

    x, y = Generator("x", ("a",), ("a",)), Generator("y", ("a",), ("a",))
    X, Y, Z = Generator("X", ("b",), ("b",)), Generator("Y", ("b",), ("b",)), Generator("Z", ("c",), ("c",))
    lg = make_layer_graph(["w", "t", "u"], [("f", "w", "t"), ("g", "t", "u"), ("h", "w", "u")], {("f", "g"): "h"})
    return make_layered_signature(
        lg,
        {"w": free(("a",), (x, y)), "t": free(("b",), (X, Y)), "u": free(("c",), (Z,))},
        {"f": Translation({"a": ("b",)}, {x: Gen(X), y: Gen(X)}),
         "g": Translation({"b": ("c",)}, {X: Gen(Z), Y: Gen(Z)}),
         "h": Translation({"a": ("c",)}, {x: Gen(Z), y: Gen(Z)})},
    ), x


def layered_witness_items():
    """(label, witness) pairs for every recorded layered derivation."""
    from . import layered as L
    from .signature import Gen

    sig = demo_layered_signature()
    th = {g.name: g for g in sig.theories["w"].signature.generators}
    tt = {g.name: g for g in sig.theories["t"].signature.generators}
    x, y, m = Gen(th["x"]), Gen(th["y"]), Gen(th["m"])
    X, Y = Gen(tt["X"]), Gen(tt["Y"])
    out = []
    for label, body in (("x", x), ("m", m)):
        _, fw, bw = L.box_to_cowindow(sig, L.box(sig, "f", body))
        out += [(f"cowindow-box[{label}] forward", fw), (f"cowindow-box[{label}] backward", bw)]
    fw, bw = L.monoidal_product_witness(sig, "f", x, y)
    out += [("monoidal-product forward", fw), ("monoidal-product backward", bw)]
    fw, bw = L.cobox_composition_witness(sig, "f", X, Y)
    out += [("cobox-composition forward", fw), ("cobox-composition backward", bw)]
    for k, (_, _, w) in L.cobox_slide_witnesses(sig, "f", ("a",), (), Y, x, c=y).items():
        out.append((f"cobox-slides {k}", w))
    _, w = L.box_of_cobox(sig, "f", ("a",), (), X)
    out.append(("box-of-cobox", w))
    e = L.extend_two_cell(sig, L.TwoCell("alpha", x, y, L.FORWARD), "f")
    out.append(("extend-two-cell", e.witness))
    csig, cx = _demo_composite_signature()
    out.append(("composite-box", L.composite_box_witness(csig, "f", "g", Gen(cx))))
    return out


def suite_layered(cfg: Config) -> SuiteReport:
    rep = SuiteReport("layered-witnesses")
    for label, w in layered_witness_items():
        rep.add(label, w.replays())
        rep.details[label] = len(w)
    return rep


# ---------------------------------------------------------------------------
# ZX rule soundness


def _zx_item(args):
    from .zx import check_rule

    e, tol, cap = args
    return check_rule(e, tol=tol, cap=cap)


def suite_zx(cfg: Config) -> SuiteReport:
    from .zx import rule_instances

    rep = SuiteReport("zx-soundness")
    eqs = list(rule_instances())
    results = _map(_zx_item, [(e, cfg.tol, max(cfg.qubitCap, 10)) for e in eqs], cfg.jobs)
    for e, ok in zip(eqs, results):
        rep.add(e.name, ok)
    return rep


# ---------------------------------------------------------------------------
# MBQC rewrites


def _mbqc_item(args):
    from .mbqc import applicable_ops, soundness_check

    g, tol, cap = args
    return [(op, soundness_check(g, op, tol=tol, cap=cap)) for op in applicable_ops(g)]


def suite_mbqc(cfg: Config, graphs: int = 600) -> SuiteReport:
    from collections import Counter

    from .mbqc import random_graph

    rep = SuiteReport("mbqc-brute")
    rng = random.Random(cfg.seed)
    gs = [random_graph(rng) for _ in range(graphs)]
    cap = max(cfg.qubitCap, MBQC_SUITE_CAP)
    kinds = Counter()
    for i, res in enumerate(_map(_mbqc_item, [(g, cfg.tol, cap) for g in gs], cfg.jobs)):
        for op, ok in res:
            kinds[op[0]] += 1
            rep.add(f"graph {i} {op}", ok)
    rep.details = {"graphs": graphs, "ops": dict(sorted(kinds.items())), "qubit_cap": cap}
    return rep


def suite_pivot(cfg: Config, max_vertices: int = 5) -> SuiteReport:
    from .mbqc import all_simple_graphs, pivot_simple, pivot_three_sets

    rep = SuiteReport("pivot")
    for n in range(2, max_vertices + 1):
        for g in all_simple_graphs(n):
            for u, v in g.sorted_edges():
                for a, b in ((u, v), (v, u)):
                    rep.add(f"{g.sorted_edges()} pivot {a}{b}", pivot_simple(g, a, b) == pivot_three_sets(g, a, b))
    return rep


# ---------------------------------------------------------------------------
# probability


def suite_prob(cfg: Config) -> SuiteReport:
    from . import prob as P

    rep = SuiteReport("prob")
    rng = random.Random(cfg.seed)
    for i in range(1000):
        c = P.random_copara(rng, *P.random_sizes(rng))
        rep.add(f"disintegration {i}", P.check_disintegration(c))
    for i in range(200):
        nz, nx, ny = P.random_sizes(rng)
        c = P.random_copara(rng, nz, nx, ny)
        g = P.random_channel(rng, c.exposed, P.finite_set("w", rng.randint(1, 4)))
        rep.add(f"postcompose {i}", P.check_box_postcompose(c, g))
        rep.add(f"box-identity {i}", P.check_box_identity(P.random_channel(rng, P.finite_set("z", nz), P.finite_set("y", ny))))
        h = P.random_channel(rng, P.finite_set("z", nz), P.finite_set("x", nx), positive=True)
        rep.add(f"full-support-identity {i}", P.check_full_support_identity(h))
        x1, x2 = P.finite_set("a", rng.randint(1, 3)), P.finite_set("b", rng.randint(1, 3))
        zs, ys = P.finite_set("z", nz), P.finite_set("y", ny)
        inner = P.random_channel(rng, zs, P.product(P.product(x1, x2), ys), positive=True)
        rep.add(f"nested {i}", P.check_nested(P.CoparaChannel(P.product(x1, x2), ys, inner), x1, x2))
    for i in range(100):
        nz, nx, ny = P.random_sizes(rng)
        zs, xs, ys = P.finite_set("z", nz), P.finite_set("x", nx), P.finite_set("y", ny)
        h = P.random_channel(rng, zs, xs, positive=True)
        g = P.ParaChannel(xs, zs, P.random_channel(rng, P.product(xs, zs), ys))
        c = P.CoparaChannel(xs, ys, P.disintegration_composite(h, g))
        r = P.check_uniqueness(c, h, g)
        rep.add(f"uniqueness {i}", r.holds and r.premise)
    return rep


# ---------------------------------------------------------------------------
# CCS


def suite_ccs(cfg: Config, max_size: int = 6, names: int = 2) -> SuiteReport:
    from .ccs import check_correspondence, default_names, enumerate_processes

    rep = SuiteReport("ccs")
    for p in enumerate_processes(max_size, default_names(names)):
        rep.add(str(p), check_correspondence(p))
    return rep


# ---------------------------------------------------------------------------
# round trips


def _random_tree(rng: random.Random, leaves: list, size: int):
    from .signature import Seq, Tensor

    if size <= 1:
        return rng.choice(leaves)
    k = rng.randint(1, size - 1)
    left, right = _random_tree(rng, leaves, k), _random_tree(rng, leaves, size - k)
    if left.cod == right.dom and rng.random() < 0.6:
        return Seq(left, right)
    return Tensor(left, right)


def roundtrip_signature():
    from .signature import Generator, make_signature

    return make_signature(("a", "b"), (
        Generator("f", ("a",), ("b",)),
        Generator("f", ("b",), ("a",)),
        Generator("m", ("a", "b"), ("a",)),
        Generator("e", ("b",), ()),
        Generator("u", (), ("a", "a")),
    ))


def random_term(rng: random.Random, sig=None, max_size: int = 8):
    from .signature import EMPTY, Gen, Id

    sig = sig or roundtrip_signature()
    leaves = [Gen(g) for g in sig.generators] + [Id(c) for c in sig.colours] + [EMPTY]
    return _random_tree(rng, leaves, rng.randint(1, max_size))


def random_zx(rng: random.Random, max_size: int = 8):
    from .signature import Id
    from .zx import H, Q, SWAP, X, Z

    def spider():
        p = Fraction(rng.randint(-8, 8), rng.choice((1, 2, 4, 8)))
        return rng.choice((Z, X))(rng.randint(0, 3), rng.randint(0, 3), p)

    leaves = [spider() for _ in range(4)] + [H(), SWAP(), Id(Q)]
    return _random_tree(rng, leaves, rng.randint(1, max_size))


def random_layered(rng: random.Random, sig, max_size: int = 4):
    """A random composite crossing circ and zx through boundaries and boxes."""
    from . import layered as L
    from .signature import Gen, Id, seq, tensor
    from .zx import Q

    circ = sig.theories["circ"].signature
    gates = [Gen(g) for g in circ.generators if g.name != "swap"]

    def circ_term(width):
        parts, w = [], 0
        while w < width:
            opts = [g for g in gates + [Id(Q)] if len(g.dom) <= width - w]
            t = rng.choice(opts)
            parts.append(t)
            w += len(t.dom)
        return tensor(*parts)

    def zx_term(width):
        parts, w = [], 0
        while w < width:
            k = rng.randint(1, width - w)
            if rng.random() < 0.3:
                t = L.box(sig, "emb", circ_term(k))
            else:
                t = sig.internal("zx", random_zx_width(k))
            parts.append(t)
            w += k
        return tensor(*parts)

    def random_zx_width(k):
        from .zx import H, Z, X

        t = rng.choice((Z, X))(k, k, Fraction(rng.randint(0, 7), 4))
        return seq(t, tensor(*[H() for _ in range(k)])) if rng.random() < 0.3 else t

    width = rng.randint(1, 2)
    pieces = [sig.internal("circ", circ_term(width))]
    for _ in range(rng.randint(0, max_size)):
        pieces += [sig.refine("emb", (Q,) * width), zx_term(width), sig.coarsen("emb", (Q,) * width)]
        if rng.random() < 0.5:
            c = L.cobox(sig, "emb", (Q,) * (width - 1), (), sig.internal("zx", random_zx_width(1)))
            pieces.append(c)
    return seq(*pieces)


def random_graph_value(rng: random.Random):
    from .mbqc import random_graph

    return random_graph(rng)


def random_channel_value(rng: random.Random):
    from . import prob as P

    xs = P.finite_set("x", rng.randint(1, 3))
    if rng.random() < 0.5:
        xs = P.product(xs, P.finite_set("k", rng.randint(1, 2)))
    ys = P.finite_set("y", rng.randint(1, 3))
    if rng.random() < 0.3:
        ys = P.product(P.finite_set("p", 2), P.product(ys, (P.ONE[0],)))
    return P.random_channel(rng, xs, ys)


def random_process(rng: random.Random, max_size: int = 8, names=("a", "b", "c")):
    from .ccs import NIL, TAU, Par, Prefix

    def go(n):
        if n <= 1:
            return NIL
        if rng.random() < 0.5 or n < 3:
            a = rng.choice((TAU,) + names + tuple("~" + x for x in names))
            return Prefix(a, go(n - 1))
        k = rng.randint(1, n - 2)
        return Par(go(k), go(n - 1 - k))

    return go(rng.randint(1, max_size))


def random_signature_value(rng: random.Random):
    from .signature import Generator, make_signature

    colours = [f"c{i}" for i in range(rng.randint(1, 3))]
    gens, seen = [], set()
    for i in range(rng.randint(0, 5)):
        g = Generator(rng.choice(("g", "h", f"k{i}")), tuple(rng.choices(colours, k=rng.randint(0, 2))),
                      tuple(rng.choices(colours, k=rng.randint(0, 2))),
                      {"w": Fraction(rng.randint(-3, 3), rng.randint(1, 3))} if rng.random() < 0.3 else {})
        if g.key not in seen:
            seen.add(g.key)
            gens.append(g)
    return make_signature(colours, gens)


def random_theory_doc(rng: random.Random) -> dict:
    from .diagram import Equation
    from .signature import seq as sseq, ident
    from .textio import serialize_term, signature_doc

    sig = random_signature_value(rng)
    doc = signature_doc(sig)
    eqs = []
    for i in range(rng.randint(0, 3)):
        t = random_term(rng, sig, 5)
        e = Equation(f"e{i}", t, sseq(t, ident(t.cod)))
        eqs.append({"name": e.name, "lhs": serialize_term(e.lhs, sig), "rhs": serialize_term(e.rhs, sig)})
    doc["equations"] = eqs
    doc["flags"] = rng.sample(["monoids", "comonoids", "symmetric"], rng.randint(0, 2))
    return doc


def roundtrip_items(rng: random.Random, count: int):
    """(format, serialize, parse, value) generators for every file format."""
    from . import layered as L
    from . import textio as T

    sig = roundtrip_signature()
    lsig = L.circuit_layers()
    formats = [
        ("term", lambda: random_term(rng, sig), lambda v: T.serialize_term(v, sig), lambda s: T.parse_term(s, sig)),
        ("zx", lambda: random_zx(rng), T.serialize_zx, T.parse_zx),
        ("layered", lambda: random_layered(rng, lsig), lambda v: T.serialize_layered(v, lsig),
         lambda s: T.parse_layered(s, lsig)),
        ("graph", lambda: random_graph_value(rng), T.serialize_graph, T.parse_graph),
        ("channel", lambda: random_channel_value(rng), T.serialize_channel, T.parse_channel),
        ("process", lambda: random_process(rng), T.serialize_process, T.parse_process),
        ("signature", lambda: random_signature_value(rng), T.serialize_signature, T.parse_signature),
        ("theory", lambda: random_theory_doc(rng), lambda d: T._dump(d),
         lambda s: T.theory_from_doc(__import__("json").loads(s))),
    ]
    return formats


def suite_roundtrip(cfg: Config, count: int = 1000) -> SuiteReport:
    import json

    from . import textio as T

    rep = SuiteReport("roundtrip")
    rng = random.Random(cfg.seed)
    for fmt, make, ser, par in roundtrip_items(rng, count):
        bad = 0
        for i in range(count):
            v = make()
            try:
                if fmt == "theory":
                    th = par(ser(v))
                    flags = tuple(v["flags"])
                    own = th.equations[len(th.equations) - len(v["equations"]):] if v["equations"] else []
                    again = T.theory_doc(th, list(own), flags)
                    base = T.signature_from_doc(v)
                    again_sig = T.signature_doc(base)
                    ok = {k: again[k] for k in ("equations", "flags")} == {k: v[k] for k in ("equations", "flags")} \
                        and again_sig == {k: v[k] for k in ("colours", "generators")}
                else:
                    s = ser(v)
                    w = par(s)
                    ok = w == v and ser(w) == s
            except Exception as e:  # a crash is a failed round trip
                ok = False
                v = f"{v} ({type(e).__name__}: {e})"
            if not ok:
                bad += 1
            rep.add(f"{fmt} {i}: {v}" if not ok else fmt, ok)
        rep.details[fmt] = {"values": count, "failed": bad}
    return rep


# ---------------------------------------------------------------------------


_RUNNERS = {
    "structural": suite_structural,
    "theories": suite_theories,
    "layered-witnesses": suite_layered,
    "zx-soundness": suite_zx,
    "mbqc-brute": suite_mbqc,
    "pivot": suite_pivot,
    "prob": suite_prob,
    "ccs": suite_ccs,
    "roundtrip": suite_roundtrip,
}


class UnknownSuite(ValueError):
    pass


def run_suite(name: str, config: Config | None = None) -> SuiteReport:
    if name not in _RUNNERS:
        raise UnknownSuite(f"unknown suite {name!r}; expected one of {', '.join(SUITES)}")
    cfg = config or Config()
    t0 = time.perf_counter()
    rep = _RUNNERS[name](cfg)
    rep.seconds = time.perf_counter() - t0
    return rep
