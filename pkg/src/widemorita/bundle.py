"""JSON bundles: named algebras, bimodules, maps, corings, cells and contexts.

One bundle holds one field mode.  Matrices are nested arrays of scalar
strings; their shapes follow from the declared dimensions.  Bimodules are
referenced by name, ``{"unit": algebra}`` or ``{"tensor": [ref, ref]}``;
maps inside compound objects are written inline.  Writing a parsed bundle
reproduces its text exactly.
"""

from __future__ import annotations

import json
from typing import Any

from . import bimod
from .algebra import Algebra
from .bimod import Bimodule, BimoduleMap, TensorBimodule, UnitBimodule
from .coring import Bicomodule, Coring, Comodule, EntwinedCell, EntwinedTwoCell, identity_cell, rem_hcompose
from .exactla import Field, Matrix, ShapeError, parse_field
from .wide import ContextMorphism, WideContext

FORMAT = "widemorita-bundle"
VERSION = 1
SECTIONS = (
    "algebras",
    "bimodules",
    "maps",
    "corings",
    "comodules",
    "bicomodules",
    "cells",
    "contexts",
    "cell_contexts",
    "morphisms",
    "samples",
)


class BundleError(ValueError):
    pass


class BundleParseError(BundleError):
    pass


class BundleReferenceError(BundleError):
    pass


def _matrix_out(m: Matrix) -> list:
    return m.to_strings()


class Bundle:
    """Named objects of one field, in insertion order per section."""

    def __init__(self, field: Field):
        self.field = field
        self.objects: dict[str, dict[str, Any]] = {s: {} for s in SECTIONS}
        self.data: dict[str, dict[str, Any]] = {s: {} for s in SECTIONS}
        self._memo: dict[tuple, str] = {}
        # cell context name -> the bicomodules its cells were built from
        self.links: dict[str, tuple] = {}

    # naming

    def _fresh(self, section: str, base: str) -> str:
        base = base or section[:-1]
        if base not in self.data[section]:
            return base
        i = 2
        while f"{base}#{i}" in self.data[section]:
            i += 1
        return f"{base}#{i}"

    def _put(self, section, obj, name, entry):
        if name in self.data[section]:
            raise BundleParseError(f"duplicate {section[:-1]} name {name!r}")
        self.data[section][name] = entry
        self.objects[section][name] = obj
        self._memo.setdefault((section, obj), name)
        return name

    def _known(self, section, obj, name):
        if name is None:
            return self._memo.get((section, obj))
        return None

    def _check_field(self, f: Field):
        if f != self.field:
            raise BundleError(f"object over {f} in a bundle over {self.field}")

    # adding objects

    def add_algebra(self, a: Algebra, name: str | None = None) -> str:
        got = self._known("algebras", a, name)
        if got:
            return got
        self._check_field(a.field)
        fmt = a.field.format
        entry = {
            "dim": a.dim,
            "structure": [[[fmt(x) for x in row] for row in plane] for plane in a.structure],
            "unit": [fmt(x) for x in a.unit],
        }
        return self._put("algebras", a, name or self._fresh("algebras", a.name or "A"), entry)

    def bimodule_ref(self, m: Bimodule):
        if isinstance(m, UnitBimodule):
            return {"unit": self.add_algebra(m.left)}
        if isinstance(m, TensorBimodule):
            return {"tensor": [self.bimodule_ref(m.factors[0]), self.bimodule_ref(m.factors[1])]}
        return self.add_bimodule(m)

    def add_bimodule(self, m: Bimodule, name: str | None = None) -> str:
        if isinstance(m, (UnitBimodule, TensorBimodule)):
            raise BundleError("only plain bimodules get a named entry")
        got = self._known("bimodules", m, name)
        if got:
            return got
        entry = {
            "left": self.add_algebra(m.left),
            "right": self.add_algebra(m.right),
            "dim": m.dim,
            "left_action": [_matrix_out(x) for x in m.left_action],
            "right_action": [_matrix_out(x) for x in m.right_action],
        }
        return self._put("bimodules", m, name or self._fresh("bimodules", m.name or "M"), entry)

    def map_entry(self, f: BimoduleMap) -> dict:
        return {
            "source": self.bimodule_ref(f.source),
            "target": self.bimodule_ref(f.target),
            "matrix": _matrix_out(f.matrix),
        }

    def add_map(self, f: BimoduleMap, name: str | None = None) -> str:
        got = self._known("maps", f, name)
        if got:
            return got
        return self._put("maps", f, name or self._fresh("maps", "map"), self.map_entry(f))

    def add_coring(self, c: Coring, name: str | None = None) -> str:
        got = self._known("corings", c, name)
        if got:
            return got
        entry = {
            "base": self.add_algebra(c.base),
            "carrier": self.bimodule_ref(c.carrier),
            "delta": self.map_entry(c.delta),
            "counit": self.map_entry(c.counit),
        }
        return self._put("corings", c, name or self._fresh("corings", c.name or "C"), entry)

    def add_comodule(self, x: Comodule, name: str | None = None) -> str:
        got = self._known("comodules", x, name)
        if got:
            return got
        entry = {
            "coring": self.add_coring(x.coring),
            "carrier": self.bimodule_ref(x.carrier),
            "coaction": self.map_entry(x.coaction),
        }
        return self._put("comodules", x, name or self._fresh("comodules", x.name or "X"), entry)

    def add_bicomodule(self, b: Bicomodule, name: str | None = None) -> str:
        got = self._known("bicomodules", b, name)
        if got:
            return got
        entry = {
            "left": self.add_coring(b.left),
            "right": self.add_coring(b.right),
            "carrier": self.bimodule_ref(b.carrier),
            "rho": self.map_entry(b.rho),
            "lambda": self.map_entry(b.lam),
        }
        return self._put("bicomodules", b, name or self._fresh("bicomodules", b.name or "P"), entry)

    def add_cell(self, x: EntwinedCell, name: str | None = None) -> str:
        got = self._known("cells", x, name)
        if got:
            return got
        entry = {
            "source": self.add_coring(x.source),
            "target": self.add_coring(x.target),
            "carrier": self.bimodule_ref(x.carrier),
            "entwining": self.map_entry(x.m),
        }
        return self._put("cells", x, name or self._fresh("cells", x.name or "cell"), entry)

    def add_context(self, ctx: WideContext, name: str | None = None) -> str:
        got = self._known("contexts", ctx, name)
        if got:
            return got
        entry = {
            "f": self.bimodule_ref(ctx.f),
            "g": self.bimodule_ref(ctx.g),
            "eta": self.map_entry(ctx.eta),
            "rho": self.map_entry(ctx.rho),
        }
        return self._put("contexts", ctx, name or self._fresh("contexts", "ctx"), entry)

    def add_cell_context(self, ctx: WideContext, name: str | None = None, m=None, n=None) -> str:
        """A context of entwined cells; ``m``, ``n`` are optional source bicomodules."""
        got = self._known("cell_contexts", ctx, name)
        if got:
            return got
        entry = {
            "f": self.add_cell(ctx.f),
            "g": self.add_cell(ctx.g),
            "eta": self.map_entry(ctx.eta.map),
            "rho": self.map_entry(ctx.rho.map),
        }
        if m is not None and n is not None:
            entry["bicomodules"] = [self.add_bicomodule(m), self.add_bicomodule(n)]
        name = self._put("cell_contexts", ctx, name or self._fresh("cell_contexts", "wctx"), entry)
        if m is not None and n is not None:
            self.links[name] = (m, n)
        return name

    def add_morphism(self, mor: ContextMorphism, name: str | None = None) -> str:
        got = self._known("morphisms", mor, name)
        if got:
            return got
        entry = {
            "source": self.add_context(mor.source),
            "target": self.add_context(mor.target),
            "alpha": self.map_entry(mor.alpha),
            "beta": self.map_entry(mor.beta),
        }
        return self._put("morphisms", mor, name or self._fresh("morphisms", "mor"), entry)

    def add_cat_samples(self, context: str, samples, name: str | None = None) -> str:
        """Comodule samples for a cell context already in the bundle."""

        def morph(f):
            return {
                "source": self.add_comodule(f.source),
                "target": self.add_comodule(f.target),
                "map": _matrix_out(f.map.matrix),
                "name": f.name,
            }

        entry = {
            "kind": "cat",
            "context": context,
            "over_c": [self.add_comodule(x) for x in samples.over_c],
            "over_d": [self.add_comodule(x) for x in samples.over_d],
            "morphisms_c": [morph(f) for f in samples.morphisms_c],
            "morphisms_d": [morph(f) for f in samples.morphisms_d],
        }
        name = name or self._fresh("samples", f"cat:{context}")
        self.data["samples"][name] = entry
        self.objects["samples"][name] = samples
        return name

    # output

    def to_dict(self) -> dict:
        out = {"format": FORMAT, "version": VERSION, "field": self.field.name}
        for s in SECTIONS:
            if self.data[s]:
                out[s] = self.data[s]
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=1, ensure_ascii=False) + "\n"

    def get(self, section: str, name: str):
        try:
            return self.objects[section][name]
        except KeyError:
            raise BundleReferenceError(f"no {section[:-1]} named {name!r}") from None

    def names(self, section: str) -> list[str]:
        return list(self.objects[section])


# ----------------------------------------------------------------------------
# parsing


class _Reader:
    def __init__(self, raw: dict):
        if not isinstance(raw, dict):
            raise BundleParseError("bundle must be a JSON object")
        if raw.get("format") != FORMAT:
            raise BundleParseError(f"not a bundle (format {raw.get('format')!r})")
        if raw.get("version") != VERSION:
            raise BundleParseError(f"unsupported bundle version {raw.get('version')!r}")
        extra = set(raw) - {"format", "version", "field", *SECTIONS}
        if extra:
            raise BundleParseError(f"unknown top-level keys: {sorted(extra)}")
        try:
            self.field = parse_field(raw.get("field", ""))
        except (ValueError, TypeError) as e:
            raise BundleParseError(f"bad field declaration: {e}") from None
        self.raw = raw
        self.out = Bundle(self.field)

    def section(self, name):
        sec = self.raw.get(name, {})
        if not isinstance(sec, dict):
            raise BundleParseError(f"section {name!r} must be an object")
        return sec

    def scalar(self, s):
        if not isinstance(s, str):
            raise BundleParseError(f"scalars are strings, got {s!r}")
        try:
            return self.field.parse(s)
        except (ValueError, ZeroDivisionError) as e:
            raise BundleParseError(f"bad scalar {s!r}: {e}") from None

    def matrix(self, rows, r, c, what):
        if not isinstance(rows, list) or len(rows) != r or any(not isinstance(x, list) or len(x) != c for x in rows):
            raise BundleParseError(f"{what}: expected a {r}x{c} matrix")
        if r == 0 or c == 0:
            return Matrix.zeros(self.field, r, c)
        return Matrix(self.field, [[self.scalar(x) for x in row] for row in rows])

    def ref(self, section, name):
        if not isinstance(name, str):
            raise BundleParseError(f"expected a {section[:-1]} name, got {name!r}")
        return self.out.get(section, name)

    def bimodule(self, ref):
        if isinstance(ref, str):
            return self.ref("bimodules", ref)
        if isinstance(ref, dict) and set(ref) == {"unit"}:
            return bimod.unit_bimodule(self.ref("algebras", ref["unit"]))
        if isinstance(ref, dict) and set(ref) == {"tensor"}:
            pair = ref["tensor"]
            if not isinstance(pair, list) or len(pair) != 2:
                raise BundleParseError("tensor reference takes two factors")
            m, n = (self.bimodule(x) for x in pair)
            if m.right != n.left:
                raise BundleReferenceError(f"tensor of {m.label} and {n.label}: middle algebras differ")
            return bimod.tensor_over(m, n)
        raise BundleParseError(f"bad bimodule reference {ref!r}")

    def map(self, e, what):
        self.keys(e, {"source", "target", "matrix"}, what)
        s, t = self.bimodule(e["source"]), self.bimodule(e["target"])
        return BimoduleMap(s, t, self.matrix(e["matrix"], t.dim, s.dim, what))

    def keys(self, e, want, what, optional=()):
        if not isinstance(e, dict):
            raise BundleParseError(f"{what}: expected an object")
        have = set(e)
        missing = want - have
        extra = have - want - set(optional)
        if missing or extra:
            raise BundleParseError(f"{what}: missing {sorted(missing)}, unexpected {sorted(extra)}")

    def run(self) -> Bundle:
        b = self.out
        for name, e in self.section("algebras").items():
            self.keys(e, {"dim", "structure", "unit"}, f"algebra {name}")
            d = e["dim"]
            if not isinstance(d, int) or d < 1:
                raise BundleParseError(f"algebra {name}: bad dimension")
            st = e["structure"]
            if not isinstance(st, list) or len(st) != d:
                raise BundleParseError(f"algebra {name}: structure must be d x d x d")
            planes = [self.matrix(p, d, d, f"algebra {name}") for p in st]
            unit = e["unit"]
            if not isinstance(unit, list) or len(unit) != d:
                raise BundleParseError(f"algebra {name}: unit has the wrong length")
            structure = [[list(p.a[j]) for j in range(d)] for p in planes]
            b.add_algebra(Algebra(self.field, structure, [self.scalar(u) for u in unit], name), name)
        for name, e in self.section("bimodules").items():
            self.keys(e, {"left", "right", "dim", "left_action", "right_action"}, f"bimodule {name}")
            left, right = self.ref("algebras", e["left"]), self.ref("algebras", e["right"])
            d = e["dim"]
            if not isinstance(d, int) or d < 0:
                raise BundleParseError(f"bimodule {name}: bad dimension")
            la, ra = e["left_action"], e["right_action"]
            if not isinstance(la, list) or not isinstance(ra, list):
                raise BundleParseError(f"bimodule {name}: actions must be lists")
            try:
                m = Bimodule(
                    left,
                    right,
                    [self.matrix(x, d, d, f"bimodule {name}") for x in la],
                    [self.matrix(x, d, d, f"bimodule {name}") for x in ra],
                    name,
                )
            except ShapeError as err:
                raise BundleParseError(f"bimodule {name}: {err}") from None
            b.add_bimodule(m, name)
        for name, e in self.section("maps").items():
            b.add_map(self.map(e, f"map {name}"), name)
        for name, e in self.section("corings").items():
            self.keys(e, {"base", "carrier", "delta", "counit"}, f"coring {name}")
            c = Coring(
                self.ref("algebras", e["base"]),
                self.bimodule(e["carrier"]),
                self.map(e["delta"], f"coring {name}"),
                self.map(e["counit"], f"coring {name}"),
                name,
            )
            b.add_coring(c, name)
        for name, e in self.section("comodules").items():
            self.keys(e, {"coring", "carrier", "coaction"}, f"comodule {name}")
            x = Comodule(
                self.ref("corings", e["coring"]),
                self.bimodule(e["carrier"]),
                self.map(e["coaction"], f"comodule {name}"),
                name,
            )
            b.add_comodule(x, name)
        for name, e in self.section("bicomodules").items():
            self.keys(e, {"left", "right", "carrier", "rho", "lambda"}, f"bicomodule {name}")
            x = Bicomodule(
                self.ref("corings", e["left"]),
                self.ref("corings", e["right"]),
                self.bimodule(e["carrier"]),
                self.map(e["rho"], f"bicomodule {name}"),
                self.map(e["lambda"], f"bicomodule {name}"),
                name,
            )
            b.add_bicomodule(x, name)
        for name, e in self.section("cells").items():
            self.keys(e, {"source", "target", "carrier", "entwining"}, f"cell {name}")
            x = EntwinedCell(
                self.ref("corings", e["source"]),
                self.ref("corings", e["target"]),
                self.bimodule(e["carrier"]),
                self.map(e["entwining"], f"cell {name}"),
                name,
            )
            b.add_cell(x, name)
        for name, e in self.section("contexts").items():
            self.keys(e, {"f", "g", "eta", "rho"}, f"context {name}")
            ctx = WideContext(
                self.bimodule(e["f"]),
                self.bimodule(e["g"]),
                self.map(e["eta"], f"context {name}"),
                self.map(e["rho"], f"context {name}"),
            )
            b.add_context(ctx, name)
        for name, e in self.section("cell_contexts").items():
            self.keys(e, {"f", "g", "eta", "rho"}, f"cell context {name}", optional=("bicomodules",))
            x, y = self.ref("cells", e["f"]), self.ref("cells", e["g"])
            if x.source != y.target or x.target != y.source:
                raise BundleReferenceError(f"cell context {name}: cells are not opposed")
            ctx = WideContext(
                x,
                y,
                EntwinedTwoCell(rem_hcompose(x, y), identity_cell(x.target), self.map(e["eta"], f"cell context {name}")),
                EntwinedTwoCell(rem_hcompose(y, x), identity_cell(x.source), self.map(e["rho"], f"cell context {name}")),
            )
            pair = e.get("bicomodules")
            if pair is not None:
                if not isinstance(pair, list) or len(pair) != 2:
                    raise BundleParseError(f"cell context {name}: bicomodules takes two names")
                m, n = (self.ref("bicomodules", p) for p in pair)
                b.add_cell_context(ctx, name, m, n)
            else:
                b.add_cell_context(ctx, name)
        for name, e in self.section("morphisms").items():
            self.keys(e, {"source", "target", "alpha", "beta"}, f"morphism {name}")
            mor = ContextMorphism(
                self.map(e["alpha"], f"morphism {name}"),
                self.map(e["beta"], f"morphism {name}"),
                self.ref("contexts", e["source"]),
                self.ref("contexts", e["target"]),
            )
            b.add_morphism(mor, name)
        for name, e in self.section("samples").items():
            self.samples(name, e)
        return b

    def samples(self, name, e):
        from .pushout import CatSamples, ComoduleMorphism

        self.keys(e, {"kind", "context", "over_c", "over_d", "morphisms_c", "morphisms_d"}, f"samples {name}")
        if e["kind"] != "cat":
            raise BundleParseError(f"samples {name}: unknown kind {e['kind']!r}")
        self.ref("cell_contexts", e["context"])
        s = CatSamples(
            [self.ref("comodules", x) for x in e["over_c"]],
            [self.ref("comodules", x) for x in e["over_d"]],
        )
        for key, dst in (("morphisms_c", s.morphisms_c), ("morphisms_d", s.morphisms_d)):
            for f in e[key]:
                self.keys(f, {"source", "target", "map", "name"}, f"samples {name}")
                x, y = self.ref("comodules", f["source"]), self.ref("comodules", f["target"])
                mp = BimoduleMap(x.carrier, y.carrier, self.matrix(f["map"], y.carrier.dim, x.carrier.dim, f"samples {name}"))
                dst.append(ComoduleMorphism(x, y, mp, f["name"]))
        self.out.add_cat_samples(e["context"], s, name)


def parse(text_or_dict) -> Bundle:
    if isinstance(text_or_dict, (str, bytes)):
        try:
            raw = json.loads(text_or_dict)
        except json.JSONDecodeError as e:
            raise BundleParseError(f"invalid JSON: {e}") from None
    else:
        raw = text_or_dict
    try:
        return _Reader(raw).run()
    except bimod.AlgebraMismatch as e:
        raise BundleReferenceError(str(e)) from None
    except (KeyError, TypeError, ShapeError) as e:
        raise BundleParseError(f"malformed bundle: {e}") from None


def load(path) -> Bundle:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
