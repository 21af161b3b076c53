"""Generic bicategory interface and a sample-driven coherence checker.

An instance supplies cell operations; :func:`check_axioms` evaluates the
pentagon, the triangle, the derived unitor identities, naturality of the
coherence cells, interchange and the Hom-category laws on finite samples.
Vertical composition follows the usual order: ``vcomp(a, b)`` is ``a o b``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import bimod
from .bimod import Bimodule, BimoduleMap
from .report import Report, diff_witness


class NotComposable(ValueError):
    pass


class Bicategory:
    """Operations every instance provides.  2-cells know their ``dom``/``cod``."""

    name = "bicategory"

    def source(self, f):
        raise NotImplementedError

    def target(self, f):
        raise NotImplementedError

    def id1(self, a):
        raise NotImplementedError

    def hcomp1(self, f, g):
        """Composite ``f g``; requires ``source(f) == target(g)``."""
        raise NotImplementedError

    def id2(self, f):
        raise NotImplementedError

    def hcomp2(self, a, b):
        raise NotImplementedError

    def vcomp(self, a, b):
        """``a o b``; requires ``cod(b) == dom(a)``."""
        raise NotImplementedError

    def dom(self, a):
        raise NotImplementedError

    def cod(self, a):
        raise NotImplementedError

    def associator(self, f, g, h):
        raise NotImplementedError

    def associator_inv(self, f, g, h):
        raise NotImplementedError

    def lunitor(self, f):
        raise NotImplementedError

    def lunitor_inv(self, f):
        raise NotImplementedError

    def runitor(self, f):
        raise NotImplementedError

    def runitor_inv(self, f):
        raise NotImplementedError

    def diff2(self, a, b, cell=None) -> dict | None:
        """Witness of the first difference between parallel 2-cells, or ``None``."""
        raise NotImplementedError

    def same1(self, f, g) -> bool:
        return f == g

    # optional capabilities

    def is_2cell(self, a) -> Report:
        """Validity of a 2-cell beyond typing; instances may override."""
        return Report("2-cell").ok("valid")

    def hom_basis(self, f, g) -> list:
        raise NotImplementedError

    def cell_vector(self, a) -> list:
        raise NotImplementedError

    def combine(self, coeffs, cells, f, g):
        raise NotImplementedError

    def is_epi(self, a) -> bool:
        raise NotImplementedError

    def is_mono(self, a) -> bool:
        raise NotImplementedError

    def invert(self, a):
        raise NotImplementedError

    # derived helpers

    def whisker_left(self, f, b):
        return self.hcomp2(self.id2(f), b)

    def whisker_right(self, a, g):
        return self.hcomp2(a, self.id2(g))

    def chain(self, *cells):
        """``cells[0] o cells[1] o ...``."""
        out = cells[-1]
        for c in reversed(cells[:-1]):
            out = self.vcomp(c, out)
        return out


class BimInstance(Bicategory):
    """Finite-dimensional algebras, bimodules and bimodule maps.

    A bimodule ``M`` over ``(A, B)`` is a 1-cell from ``B`` to ``A``.
    """

    name = "Bim"

    def source(self, f: Bimodule):
        return f.right

    def target(self, f: Bimodule):
        return f.left

    def id1(self, a):
        return bimod.unit_bimodule(a)

    def hcomp1(self, f, g):
        if f.right != g.left:
            raise NotComposable(f"{f.label} and {g.label} are not composable")
        return bimod.tensor_over(f, g)

    def id2(self, f):
        return bimod.identity(f)

    def hcomp2(self, a, b):
        return bimod.induced_map(a, b)

    def vcomp(self, a, b):
        return a @ b

    def dom(self, a):
        return a.source

    def cod(self, a):
        return a.target

    def associator(self, f, g, h):
        return bimod.associator(f, g, h)

    def associator_inv(self, f, g, h):
        return bimod.associator_inv(f, g, h)

    def lunitor(self, f):
        return bimod.left_unitor(f)

    def lunitor_inv(self, f):
        return bimod.left_unitor_inv(f)

    def runitor(self, f):
        return bimod.right_unitor(f)

    def runitor_inv(self, f):
        return bimod.right_unitor_inv(f)

    def diff2(self, a, b, cell=None):
        if a.source != b.source or a.target != b.target:
            return {"cell": cell, "reason": "type"}
        return diff_witness(a.matrix, b.matrix, cell)

    def difference(self, a, b):
        return a.matrix - b.matrix

    def is_2cell(self, a):
        return bimod.validate_map(a)

    def hom_basis(self, f, g):
        return bimod.hom_basis(f, g)

    def cell_vector(self, a):
        return a.matrix.vec()

    def combine(self, coeffs, cells, f, g):
        return bimod.combine_maps(coeffs, cells, f, g)

    def is_epi(self, a):
        return a.is_surjective()

    def is_mono(self, a):
        return a.is_injective()

    def invert(self, a):
        return a.inverse()


@dataclass
class AxiomSamples:
    """Finite samples for the axiom checker.

    ``objects``: 0-cells; ``cells``: 1-cells; ``pairs``/``quadruples``:
    composable 1-cell tuples; ``cell_triples``: 2-cells ``(a, b, c)`` with
    ``dom``s horizontally composable; ``twocells``: single 2-cells;
    ``interchanges``: ``(a, a2, b, b2)`` with ``a o a2`` and ``b o b2``
    defined and ``a, b`` horizontally composable; ``vertical_triples``:
    ``(a, b, c)`` with ``a o b o c`` defined.
    """

    objects: list = field(default_factory=list)
    cells: list = field(default_factory=list)
    pairs: list = field(default_factory=list)
    quadruples: list = field(default_factory=list)
    cell_triples: list = field(default_factory=list)
    twocells: list = field(default_factory=list)
    interchanges: list = field(default_factory=list)
    vertical_triples: list = field(default_factory=list)

    def size(self) -> int:
        return sum(
            len(x)
            for x in (
                self.objects,
                self.cells,
                self.pairs,
                self.quadruples,
                self.cell_triples,
                self.twocells,
                self.interchanges,
                self.vertical_triples,
            )
        )


AXIOMS = (
    "pentagon",
    "triangle",
    "unit-right-composite",
    "unit-left-composite",
    "unit-middle",
    "unit-identity",
    "associator-invertible",
    "unitors-invertible",
    "associator-natural",
    "runitor-natural",
    "lunitor-natural",
    "interchange",
    "hom-category",
)


def _composable(inst, *fs):
    for f, g in zip(fs, fs[1:]):
        if inst.source(f) != inst.target(g):
            return False
    return True


def check_axioms(inst: Bicategory, samples: AxiomSamples) -> Report:
    """Evaluate every coherence law on the samples; one finding per axiom.

    Each finding records the number of sample instances evaluated.  A sample
    that is not composable is an error finding rather than being skipped.
    """
    rep = Report(f"axioms {inst.name}")
    results = {name: [] for name in AXIOMS}
    errors = {name: [] for name in AXIOMS}

    def record(name, idx, a, b):
        w = inst.diff2(a, b, name)
        results[name].append((idx, w))

    def bad_sample(name, idx, msg):
        errors[name].append((idx, msg))

    # pentagon
    for idx, (f, g, h, k) in enumerate(samples.quadruples):
        if not _composable(inst, f, g, h, k):
            bad_sample("pentagon", idx, "quadruple not composable")
            continue
        fg, gh, hk = inst.hcomp1(f, g), inst.hcomp1(g, h), inst.hcomp1(h, k)
        # ((fg)h)k -> (fg)(hk) -> f(g(hk))
        lhs = inst.vcomp(inst.associator(f, g, hk), inst.associator(fg, h, k))
        # ((fg)h)k -> (f(gh))k -> f((gh)k) -> f(g(hk))
        rhs = inst.chain(
            inst.whisker_left(f, inst.associator(g, h, k)),
            inst.associator(f, gh, k),
            inst.whisker_right(inst.associator(f, g, h), k),
        )
        record("pentagon", idx, lhs, rhs)

    # triangle and unit identities on pairs
    for idx, (f, g) in enumerate(samples.pairs):
        if not _composable(inst, f, g):
            for name in ("triangle", "unit-right-composite", "unit-left-composite"):
                bad_sample(name, idx, "pair not composable")
            continue
        mid = inst.id1(inst.source(f))
        # (f I) g -> f (I g) -> f g  equals  (f I) g -> f g
        lhs = inst.vcomp(inst.whisker_left(f, inst.lunitor(g)), inst.associator(f, mid, g))
        rhs = inst.whisker_right(inst.runitor(f), g)
        record("triangle", idx, lhs, rhs)
        # r_{fg} = (1 r_g) o a_{f,g,I}
        i_src = inst.id1(inst.source(g))
        lhs = inst.runitor(inst.hcomp1(f, g))
        rhs = inst.vcomp(inst.whisker_left(f, inst.runitor(g)), inst.associator(f, g, i_src))
        record("unit-right-composite", idx, lhs, rhs)
        # l_{fg} = (l_f 1) o a^{-1}_{I,f,g}
        i_tgt = inst.id1(inst.target(f))
        lhs = inst.lunitor(inst.hcomp1(f, g))
        rhs = inst.vcomp(inst.whisker_right(inst.lunitor(f), g), inst.associator_inv(i_tgt, f, g))
        record("unit-left-composite", idx, lhs, rhs)

    for idx, f in enumerate(samples.cells):
        i_t, i_s = inst.id1(inst.target(f)), inst.id1(inst.source(f))
        # (I f) I: l_f o (1 r_f) o a  equals  r_f o (l_f 1)
        lhs = inst.chain(
            inst.lunitor(f),
            inst.whisker_left(i_t, inst.runitor(f)),
            inst.associator(i_t, f, i_s),
        )
        rhs = inst.vcomp(inst.runitor(f), inst.whisker_right(inst.lunitor(f), i_s))
        record("unit-middle", idx, lhs, rhs)
        ifi = inst.hcomp1(f, i_s)
        record("unitors-invertible", idx, inst.vcomp(inst.runitor(f), inst.runitor_inv(f)), inst.id2(f))
        record("unitors-invertible", idx, inst.vcomp(inst.runitor_inv(f), inst.runitor(f)), inst.id2(ifi))
        ift = inst.hcomp1(i_t, f)
        record("unitors-invertible", idx, inst.vcomp(inst.lunitor(f), inst.lunitor_inv(f)), inst.id2(f))
        record("unitors-invertible", idx, inst.vcomp(inst.lunitor_inv(f), inst.lunitor(f)), inst.id2(ift))

    for idx, a in enumerate(samples.objects):
        i = inst.id1(a)
        record("unit-identity", idx, inst.runitor(i), inst.lunitor(i))

    for idx, (f, g, h, k) in enumerate(samples.quadruples):
        if not _composable(inst, f, g, h):
            continue
        a = inst.associator(f, g, h)
        ai = inst.associator_inv(f, g, h)
        record("associator-invertible", idx, inst.vcomp(ai, a), inst.id2(inst.dom(a)))
        record("associator-invertible", idx, inst.vcomp(a, ai), inst.id2(inst.cod(a)))

    # naturality
    for idx, (x, y, z) in enumerate(samples.cell_triples):
        f, g, h = inst.dom(x), inst.dom(y), inst.dom(z)
        f2, g2, h2 = inst.cod(x), inst.cod(y), inst.cod(z)
        if not (_composable(inst, f, g, h) and _composable(inst, f2, g2, h2)):
            bad_sample("associator-natural", idx, "2-cells not horizontally composable")
            continue
        lhs = inst.vcomp(inst.associator(f2, g2, h2), inst.hcomp2(inst.hcomp2(x, y), z))
        rhs = inst.vcomp(inst.hcomp2(x, inst.hcomp2(y, z)), inst.associator(f, g, h))
        record("associator-natural", idx, lhs, rhs)

    for idx, x in enumerate(samples.twocells):
        f, f2 = inst.dom(x), inst.cod(x)
        i_s, i_t = inst.id1(inst.source(f)), inst.id1(inst.target(f))
        lhs = inst.vcomp(inst.runitor(f2), inst.whisker_right(x, i_s))
        rhs = inst.vcomp(x, inst.runitor(f))
        record("runitor-natural", idx, lhs, rhs)
        lhs = inst.vcomp(inst.lunitor(f2), inst.whisker_left(i_t, x))
        rhs = inst.vcomp(x, inst.lunitor(f))
        record("lunitor-natural", idx, lhs, rhs)

    for idx, (a, a2, b, b2) in enumerate(samples.interchanges):
        if not (inst.same1(inst.dom(a), inst.cod(a2)) and inst.same1(inst.dom(b), inst.cod(b2))):
            bad_sample("interchange", idx, "vertical composites undefined")
            continue
        if not _composable(inst, inst.dom(a2), inst.dom(b2)):
            bad_sample("interchange", idx, "not horizontally composable")
            continue
        lhs = inst.hcomp2(inst.vcomp(a, a2), inst.vcomp(b, b2))
        rhs = inst.vcomp(inst.hcomp2(a, b), inst.hcomp2(a2, b2))
        record("interchange", idx, lhs, rhs)

    for idx, (a, b, c) in enumerate(samples.vertical_triples):
        if not (inst.same1(inst.dom(a), inst.cod(b)) and inst.same1(inst.dom(b), inst.cod(c))):
            bad_sample("hom-category", idx, "vertical triple not composable")
            continue
        record("hom-category", idx, inst.vcomp(inst.vcomp(a, b), c), inst.vcomp(a, inst.vcomp(b, c)))
        record("hom-category", idx, inst.vcomp(inst.id2(inst.cod(a)), a), a)
        record("hom-category", idx, inst.vcomp(a, inst.id2(inst.dom(a))), a)

    for name in AXIOMS:
        res = results[name]
        if errors[name]:
            idx, msg = errors[name][0]
            rep.error(name, f"sample {idx}: {msg}")
            continue
        bad = [(i, w) for i, w in res if w is not None]
        info = {"evaluated": len(res)}
        if bad:
            i, w = bad[0]
            rep.fail(name, {"sample": i, **w}, {**info, "failing": len(bad)})
        else:
            rep.ok(name, info)
    return rep
