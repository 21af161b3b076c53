"""Command-line driver: run checks and constructions on bundles, emit JSON reports.

Exit status: 0 when every check passes, 1 when some check fails or errors,
2 when the bundle cannot be parsed or a reference does not resolve.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import bimod, coring, corpus, pushout, wide
from .algebra import validate_algebra
from .bicat import check_axioms
from .bundle import Bundle, BundleError, BundleParseError, BundleReferenceError, load
from .exactla import QQ, parse_field
from .report import ERROR, FAIL, PASS, Report

REPORT_FORMAT = "widemorita-report"
REPORT_VERSION = 1
BIM = corpus.BIM
REM = coring.REMInstance()


class UsageError(Exception):
    pass


def _sub(rep: Report, name: str, sub: Report):
    rep.extend(sub, prefix=f"{name}/")


def _pick(bundle: Bundle, section: str, name: str | None) -> list[str]:
    if name is None:
        return bundle.names(section)
    bundle.get(section, name)
    return [name]


def _guard(rep: Report, label: str, fn):
    """Run ``fn``; typing and precondition problems become error findings."""
    try:
        return fn()
    except (wide.ContextTypeError, wide.PreconditionError, coring.InvalidInput, bimod.AlgebraMismatch) as e:
        rep.error(label, str(e))
    except (wide.NoSolution, wide.NonUniqueSolution, wide.ConsistencyError) as e:
        rep.error(label, f"{type(e).__name__}: {e}")
    return None


# ----------------------------------------------------------------------------
# commands on bundles


def cmd_validate(b: Bundle, args) -> Report:
    rep = Report("validate")
    for n, a in b.objects["algebras"].items():
        _sub(rep, f"algebra:{n}", validate_algebra(a))
    for n, m in b.objects["bimodules"].items():
        _sub(rep, f"bimodule:{n}", bimod.validate_bimodule(m))
    for n, f in b.objects["maps"].items():
        _sub(rep, f"map:{n}", bimod.validate_map(f))
    for n, c in b.objects["corings"].items():
        _sub(rep, f"coring:{n}", coring.validate_coring(c))
    for n, x in b.objects["comodules"].items():
        _sub(rep, f"comodule:{n}", coring.validate_comodule(x))
    for n, x in b.objects["bicomodules"].items():
        _sub(rep, f"bicomodule:{n}", coring.validate_bicomodule(x))
    for n, x in b.objects["cells"].items():
        _sub(rep, f"cell:{n}", coring.check_entwined_cell(x))
    for n, ctx in b.objects["contexts"].items():
        sub = _guard(rep, f"context:{n}", lambda: wide.check_context(BIM, ctx))
        if sub is not None:
            _sub(rep, f"context:{n}", sub)
    for n, ctx in b.objects["cell_contexts"].items():
        _sub(rep, f"cell-context:{n}", coring.check_wrem_context(ctx))
    for n, mor in b.objects["morphisms"].items():
        _sub(rep, f"morphism:{n}", wide.check_morphism(BIM, mor))
    return rep


def cmd_check_context(b: Bundle, args) -> Report:
    rep = Report("check-context")
    for n in _pick(b, "contexts", args.name):
        ctx = b.get("contexts", n)
        sub = _guard(rep, n, lambda: wide.check_context(BIM, ctx))
        if sub is not None:
            _sub(rep, n, sub)
    return rep


def cmd_mul_contexts(b: Bundle, args) -> Report:
    rep = Report("mul-contexts")
    names = b.names("contexts")
    if args.name and args.other:
        pairs = [(args.name, args.other)]
    else:
        pairs = [
            (x, y)
            for x in names
            for y in names
            if BIM.source(b.get("contexts", x).f) == BIM.target(b.get("contexts", y).f)
        ]
    for x, y in pairs:
        label = f"{x}*{y}"
        ctx, lam = b.get("contexts", x), b.get("contexts", y)
        prod = _guard(rep, label, lambda: wide.multiply_contexts(BIM, ctx, lam))
        if prod is None:
            continue
        sub = wide.check_context(BIM, prod)
        sub.ok("dimensions", {"f": prod.f.dim, "g": prod.g.dim})
        _sub(rep, label, sub)
    return rep


def cmd_check_morphism(b: Bundle, args) -> Report:
    rep = Report("check-morphism")
    for n in _pick(b, "morphisms", args.name):
        _sub(rep, n, wide.check_morphism(BIM, b.get("morphisms", n)))
    return rep


def cmd_identity_context(b: Bundle, args) -> Report:
    rep = Report("identity-context")
    for n in _pick(b, "algebras", args.name):
        ctx = wide.identity_context(BIM, b.get("algebras", n))
        _sub(rep, n, wide.check_context(BIM, ctx))
    return rep


def cmd_from_equivalence(b: Bundle, args) -> Report:
    """Equivalence data ``(f, g, eta, rho^{-1})`` from invertible contexts; solve for rho."""
    rep = Report("from-equivalence")
    for n in _pick(b, "contexts", args.name):
        ctx = b.get("contexts", n)
        if not (ctx.eta.is_invertible() and ctx.rho.is_invertible()):
            rep.ok(f"{n}/skipped", {"reason": "eta or rho is not invertible"})
            continue
        res = _guard(rep, n, lambda: wide.context_from_equivalence(BIM, ctx.f, ctx.g, ctx.eta, ctx.rho.inverse()))
        if res is None:
            continue
        _sub(rep, n, res.report)
        rep.compare(f"{n}/recovers-rho", res.context.rho.matrix, ctx.rho.matrix)
    return rep


def cmd_epi_iso(b: Bundle, args) -> Report:
    rep = Report("epi-iso")
    for n in _pick(b, "contexts", args.name):
        ctx = b.get("contexts", n)
        res = _guard(rep, n, lambda: wide.epi_implies_iso(BIM, ctx))
        if res is not None:
            _sub(rep, n, res.report)
    return rep


def cmd_check_coring(b: Bundle, args) -> Report:
    rep = Report("check-coring")
    for n in _pick(b, "corings", args.name):
        _sub(rep, n, coring.validate_coring(b.get("corings", n)))
    return rep


def cmd_check_cell(b: Bundle, args) -> Report:
    """Entwined cells, and the cells built from each bicomodule with trivial left part."""
    rep = Report("check-cell")
    for n in _pick(b, "cells", args.name):
        _sub(rep, n, coring.check_entwined_cell(b.get("cells", n)))
    if args.name is None:
        for n, bc in b.objects["bicomodules"].items():
            cell = _guard(rep, f"bicomodule:{n}", lambda: coring.cell_from_bicomodule(bc))
            if cell is not None:
                _sub(rep, f"bicomodule:{n}", coring.check_entwined_cell(cell))
    return rep


def cmd_rem_compose(b: Bundle, args) -> Report:
    """Every composable pair of cells: the composite is a cell and unitors are 2-cells."""
    rep = Report("rem-compose")
    cells = b.objects["cells"]
    for x in cells:
        for y in cells:
            cx, cy = cells[x], cells[y]
            if cx.source != cy.target:
                continue
            label = f"{x}*{y}"
            comp = coring.rem_hcompose(cx, cy)
            _sub(rep, label, coring.check_entwined_cell(comp))
            left, right = coring.rem_unitors(comp)
            _sub(rep, f"{label}/left-unitor", coring.check_two_cell(left))
            _sub(rep, f"{label}/right-unitor", coring.check_two_cell(right))
    return rep


def cmd_check_wrem(b: Bundle, args) -> Report:
    rep = Report("check-wrem")
    for n in _pick(b, "cell_contexts", args.name):
        ctx = b.get("cell_contexts", n)
        sub = coring.check_wrem_context(ctx)
        gen = wide.check_context(REM, ctx)
        sub.compare("agrees-with-generic", _verdicts(sub), _verdicts(gen, generic=True))
        _sub(rep, n, sub)
    return rep


def _verdicts(rep: Report, generic=False):
    """Pass bits of the four cell equations, as a 1x4 matrix, for comparison."""
    from .exactla import Matrix

    names = ("eta-cell", "rho-cell", "f-side", "g-side") if generic else ("eta-entwining", "rho-entwining", "f-side", "g-side")
    return Matrix(QQ, [[1 if rep.get(x).status == PASS else 0 for x in names]])


def cmd_classical_roundtrip(b: Bundle, args) -> Report:
    rep = Report("classical-roundtrip")
    for n in _pick(b, "contexts", args.name):
        ctx = b.get("contexts", n)
        u = coring.classical_to_wrem(ctx)
        back = coring.wrem_to_classical(u)
        if back == ctx:
            rep.ok(f"{n}/roundtrip")
        else:
            rep.fail(f"{n}/roundtrip", {"reason": "context changed"})
        classical = wide.check_context(BIM, ctx)
        unfolded = coring.check_wrem_context(u)
        for cname, uname in coring.CLASSICAL_PAIRING.items():
            same = (classical.get(cname).status == PASS) == (unfolded.get(uname).status == PASS)
            if same:
                rep.ok(f"{n}/{cname}-verdict")
            else:
                rep.fail(f"{n}/{cname}-verdict", {"classical": classical.get(cname).status, "unfolded": unfolded.get(uname).status})
        moved = coring.transported_differences(ctx, unfolded)
        for cname, d in moved.items():
            rep.compare(f"{n}/{cname}-witness", d, classical.get(cname).difference)
    return rep


def cmd_pushout(b: Bundle, args) -> Report:
    """Push every comodule along every cell out of its coring; validate the result."""
    rep = Report("pushout")
    for cn, cell in b.objects["cells"].items():
        for xn, x in b.objects["comodules"].items():
            if x.coring != cell.target:
                continue
            _sub(rep, f"{cn}({xn})", coring.validate_comodule(pushout.pushout_apply(cell, x)))
    return rep


def cmd_check_cat_context(b: Bundle, args) -> Report:
    rep = Report("check-cat-context")
    for n, e in b.data["samples"].items():
        ctxn = e["context"]
        if args.name is not None and ctxn != args.name:
            continue
        ctx = b.get("cell_contexts", ctxn)
        _sub(rep, n, pushout.check_cat_context(ctx, b.get("samples", n)))
    return rep


def cmd_reconstruct(b: Bundle, args) -> Report:
    """Extract maps at cofree comodules, rebuild the context, compare."""
    rep = Report("reconstruct")
    for n in _pick(b, "cell_contexts", args.name):
        ctx = b.get("cell_contexts", n)
        link = b.links.get(n)
        if link is None:
            rep.ok(f"{n}/skipped", {"reason": "no bicomodules recorded"})
            continue
        e, r = pushout.extract(ctx)
        rec = _guard(rep, n, lambda: pushout.reconstruct_context(link[0], link[1], e, r))
        if rec is None:
            continue
        new, hyp = rec
        _sub(rep, f"{n}/hypotheses", hyp)
        for part in ("f", "g"):
            if getattr(new, part) == getattr(ctx, part):
                rep.ok(f"{n}/{part}-recovered")
            else:
                rep.fail(f"{n}/{part}-recovered", {"reason": "cell differs"})
        rep.compare(f"{n}/eta-recovered", new.eta.map.matrix, ctx.eta.map.matrix)
        rep.compare(f"{n}/rho-recovered", new.rho.map.matrix, ctx.rho.map.matrix)
        _sub(rep, f"{n}/rebuilt", coring.check_wrem_context(new))
    return rep


# ----------------------------------------------------------------------------
# commands that generate their own inputs


def cmd_bicat_axioms(args, field) -> Report:
    n = args.samples
    seed = args.seed
    if args.instance == "bim":
        inst, samples = BIM, corpus.bim_axiom_samples(seed, n, field)
    elif args.instance == "w":
        inst, samples = wide.WInstance(BIM), corpus.w_axiom_samples(seed, n, field)
    else:
        inst, samples = REM, corpus.rem_axiom_samples(seed, n, field)
    return check_axioms(inst, samples)


GENERATORS = (
    "matrix-morita",
    "corner",
    "corings",
    "negatives",
    "sweedler-context",
    "bicomodules",
    "random-algebra",
    "random-bimodule",
    "corpus",
)


def generate(name: str, field, seed: int, n: int, samples: int, algebra: str | None = None) -> Bundle:
    b = Bundle(field)
    if name == "matrix-morita":
        b.add_context(corpus.matrix_morita(n, field), f"matrix-{n}")
    elif name == "corner":
        algs = corpus.small_algebras(field)
        if algebra is not None and algebra not in algs:
            raise UsageError(f"unknown algebra {algebra!r}; choose from {sorted(algs)}")
        for an, alg in algs.items():
            if algebra is not None and an != algebra:
                continue
            for i, e in enumerate(corpus.corner_idempotents(alg)):
                b.add_context(corpus.corner_context(alg, e).context, f"corner-{an}-{i}")
    elif name == "corings":
        for t in corpus.coring_pool(field):
            if t.tag == "pass":
                b.add_coring(t.value, t.name)
    elif name == "negatives":
        for t in corpus.coring_pool(field):
            if t.tag != "pass":
                b.add_coring(t.value, t.name)
        for t in corpus.context_pool(field)[:2]:
            b.add_context(corpus.corrupt_context(t.value, "eta", 2), f"{t.name}-eta-x2")
    elif name == "sweedler-context":
        _add_cell_context(b, corpus.sweedler_context(field), seed)
    elif name == "bicomodules":
        for t in corpus.random_bicomodules(seed, samples, field):
            bc, target = t.value
            b.add_bicomodule(bc, t.name)
            b.add_cell(coring.cell_from_bicomodule(bc, target), t.name)
    elif name == "random-algebra":
        b.add_algebra(corpus.random_algebra(seed, n, field), f"R{n}[{seed}]")
    elif name == "random-bimodule":
        algs, mods = corpus.random_chain(seed, 1, field)
        b.add_bimodule(mods[0], mods[0].name)
    elif name == "corpus":
        for t in corpus.context_pool(field):
            b.add_context(t.value, t.name)
        for t in corpus.random_corner_contexts(seed, samples, field):
            b.add_context(t.value, t.name)
        for i, mor in enumerate(corpus.context_endomorphisms(corpus.matrix_morita(2, field))):
            b.add_morphism(mor, f"matrix-2-endo-{i}")
        for t in corpus.coring_pool(field):
            if t.tag == "pass":
                b.add_coring(t.value, t.name)
        _add_cell_context(b, corpus.trivial_cell_context(corpus.matrix_morita(2, field), "matrix-2-cells"), seed)
        _add_cell_context(b, corpus.sweedler_context(field), seed)
        for t in corpus.random_bicomodules(seed, samples, field):
            bc, target = t.value
            b.add_bicomodule(bc, t.name)
            b.add_cell(coring.cell_from_bicomodule(bc, target), t.name)
    else:
        raise UsageError(f"unknown generator {name!r}")
    return b


def _add_cell_context(b: Bundle, cc: corpus.CellContext, seed: int):
    name = b.add_cell_context(cc.context, cc.name, cc.m, cc.n)
    b.add_cat_samples(name, corpus.cat_samples(cc.context, seed))


BUNDLE_COMMANDS = {
    "validate": cmd_validate,
    "check-context": cmd_check_context,
    "mul-contexts": cmd_mul_contexts,
    "check-morphism": cmd_check_morphism,
    "identity-context": cmd_identity_context,
    "from-equivalence": cmd_from_equivalence,
    "epi-iso": cmd_epi_iso,
    "check-coring": cmd_check_coring,
    "check-cell": cmd_check_cell,
    "rem-compose": cmd_rem_compose,
    "check-wrem": cmd_check_wrem,
    "classical-roundtrip": cmd_classical_roundtrip,
    "pushout": cmd_pushout,
    "check-cat-context": cmd_check_cat_context,
    "reconstruct": cmd_reconstruct,
}
COMMANDS = tuple(BUNDLE_COMMANDS) + ("bicat-axioms", "gen")


# ----------------------------------------------------------------------------
# reports and the entry point


def report_document(rep: Report, command: str, field, seed, seconds=None) -> dict:
    checks = sorted((f.to_dict() for f in rep.findings), key=lambda d: d["name"])
    statuses = {c["status"] for c in checks}
    status = ERROR if ERROR in statuses else FAIL if FAIL in statuses else PASS
    doc = {
        "format": REPORT_FORMAT,
        "version": REPORT_VERSION,
        "command": command,
        "field": field.name if field is not None else None,
        "seed": seed,
        "status": status,
        "summary": {s: sum(c["status"] == s for c in checks) for s in (PASS, FAIL, ERROR)},
        "checks": checks,
    }
    if seconds is not None:
        doc["timing"] = {"seconds": round(seconds, 3)}
    return doc


def dump_json(doc: dict) -> str:
    return json.dumps(doc, indent=1, ensure_ascii=False) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="widemorita", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("target", nargs="?", help="bundle path, or generator name for gen")
    p.add_argument("--field", default=None, help="Q or Fp:<p> (default: the bundle's field, else Fp:101)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", default=None, help="write the report or bundle here instead of stdout")
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--verbose", action="store_true", help="list every check on stderr")
    p.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    p.add_argument("--name", default=None, help="restrict to one named object")
    p.add_argument("--other", default=None, help="second context for mul-contexts")
    p.add_argument("--n", type=int, default=2, help="size parameter for gen")
    p.add_argument("--algebra", default=None, help="algebra name for gen corner")
    p.add_argument("--instance", choices=("bim", "w", "rem"), default="bim", help="instance for bicat-axioms")
    return p


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed < 0 or args.seed >= 2**64:
        print("error: --seed must be an unsigned 64-bit integer", file=sys.stderr)
        return 2
    try:
        field = parse_field(args.field) if args.field else None
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    start = time.perf_counter()
    try:
        if args.command == "gen":
            if not args.target:
                raise UsageError(f"gen needs a generator: {', '.join(GENERATORS)}")
            b = generate(args.target, field or parse_field("Fp:101"), args.seed, args.n, args.samples, args.algebra)
            _emit(b.dumps(), args.out)
            return 0
        if args.command == "bicat-axioms":
            field = field or parse_field("Fp:101")
            rep = cmd_bicat_axioms(args, field)
        else:
            if not args.target:
                raise UsageError(f"{args.command} needs a bundle path")
            b = load(args.target)
            if field is not None and field != b.field:
                raise BundleParseError(f"bundle is over {b.field}, not {field}")
            field = b.field
            rep = BUNDLE_COMMANDS[args.command](b, args)
    except (BundleParseError, BundleReferenceError, BundleError, UsageError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    seconds = time.perf_counter() - start if args.timing else None
    doc = report_document(rep, args.command, field, args.seed, seconds)
    if args.verbose:
        for c in doc["checks"]:
            print(f"{c['status']:5} {c['name']}", file=sys.stderr)
    _emit(dump_json(doc), args.out)
    return 0 if doc["status"] == PASS else 1


if __name__ == "__main__":
    sys.exit(main())
