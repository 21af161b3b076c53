"""Corings, comodules and the bicategory of entwined cells over bimodules.

A coring ``(C : A)`` is an (A, A)-bimodule with a coassociative
comultiplication ``C -> C (x)_A C`` and a counit ``C -> A``.  A 1-cell from
``(D : B)`` to ``(C : A)`` is an (A, B)-bimodule ``M`` with an entwining map
``m: C (x)_A M -> M (x)_B D``; 2-cells are kept in reduced form
``alpha: C (x)_A M -> M'``.

Tensor words are rebracketed explicitly with :func:`bimod.rebracket`, and
identifications like ``A (x) M = M (x) B`` go through ``iota``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import bimod
from .algebra import Algebra
from .bicat import Bicategory, NotComposable
from .bimod import (
    Bimodule,
    BimoduleMap,
    identity,
    induced_map,
    rebracket,
    tensor_over,
    unit_bimodule,
)
from .exactla import Matrix, kernel_basis
from .report import Report, diff_witness
from .wide import WideContext


class InvalidInput(ValueError):
    pass


def _wl(m: Bimodule, g: BimoduleMap) -> BimoduleMap:
    return induced_map(identity(m), g)


def _wr(f: BimoduleMap, n: Bimodule) -> BimoduleMap:
    return induced_map(f, identity(n))


def _rb(src: Bimodule, tgt: Bimodule) -> BimoduleMap:
    return rebracket(src, tgt)


def _then(*maps: BimoduleMap) -> BimoduleMap:
    """Compose left to right: ``_then(a, b, c) = c o b o a``."""
    out = maps[0]
    for g in maps[1:]:
        out = g @ out
    return out


# ----------------------------------------------------------------------------
# corings and comodules


@dataclass(frozen=True)
class Coring:
    base: Algebra
    carrier: Bimodule
    delta: BimoduleMap
    counit: BimoduleMap
    name: str | None = field(default=None, compare=False)

    @property
    def field(self):
        return self.base.field

    @property
    def label(self):
        return self.name or self.carrier.label


def trivial_coring(alg: Algebra) -> Coring:
    """``A`` itself, with ``A -> A (x)_A A`` and the identity counit."""
    i = unit_bimodule(alg)
    return Coring(alg, i, bimod.left_unitor_inv(i), identity(i), f"({alg.name}:{alg.name})")


def is_trivial(c: Coring) -> bool:
    return c == trivial_coring(c.base)


def _sweedler_tensor(alg: Algebra, sub: Algebra, phi: Matrix):
    reg = bimod.regular_bimodule(alg)
    ab = bimod.restrict(reg, right=(sub, phi), name=f"{alg.name}_{sub.name}")
    ba = bimod.restrict(reg, left=(sub, phi), name=f"{sub.name}_{alg.name}")
    return tensor_over(ab, ba)


def sweedler_grouplike(alg: Algebra, sub: Algebra, phi: Matrix) -> Matrix:
    """The class of ``1 (x) 1`` in ``A (x)_B A``, a grouplike element."""
    u = alg.unit_vector
    return _sweedler_tensor(alg, sub, phi).projection @ u.kron(u)


def sweedler_coring(alg: Algebra, sub: Algebra, phi: Matrix, name=None) -> Coring:
    """``A (x)_B A`` for an algebra map ``phi: B -> A`` (columns: images of the basis of B).

    ``Delta(a (x) a') = (a (x) 1) (x) (1 (x) a')`` and the counit multiplies.
    The carrier is a plain copy of the tensor, so ``C (x)_A C`` has two leaves.
    """
    f = alg.field
    t = _sweedler_tensor(alg, sub, phi)
    C = bimod.leaf_copy(t, name or f"{alg.name}*{sub.name}{alg.name}")
    n = alg.dim
    u = alg.unit_vector
    ident = Matrix.identity(f, n)
    left_half = t.projection @ ident.kron(u)
    right_half = t.projection @ u.kron(ident)
    cc = tensor_over(C, C)
    delta = BimoduleMap(C, cc, cc.projection @ left_half.kron(right_half) @ t.section)
    mult = Matrix(f, alg.structure.reshape(n * n, n).T.copy())
    counit = BimoduleMap(C, unit_bimodule(alg), mult @ t.section)
    return Coring(alg, C, delta, counit, name or f"({C.label}:{alg.name})")


def scaled_coring(c: Coring, part: str, factor) -> Coring:
    """A deliberately broken copy with ``delta`` or ``counit`` scaled."""
    if part == "delta":
        return Coring(c.base, c.carrier, c.delta.scale(factor), c.counit, c.name)
    if part == "counit":
        return Coring(c.base, c.carrier, c.delta, c.counit.scale(factor), c.name)
    raise ValueError(f"unknown coring part {part!r}")


def validate_coring(c: Coring) -> Report:
    rep = Report(f"coring {c.label}")
    C = c.carrier
    if C.left != c.base or C.right != c.base:
        rep.error("typing", "carrier is not a bimodule over the base algebra")
        return rep
    cc = tensor_over(C, C)
    if c.delta.source != C or c.delta.target != cc or c.counit.source != C or c.counit.target != unit_bimodule(c.base):
        rep.error("typing", "comultiplication or counit has the wrong type")
        return rep
    for name, g in (("delta-bilinear", c.delta), ("counit-bilinear", c.counit)):
        sub = bimod.validate_map(g)
        if sub.passed:
            rep.ok(name)
        else:
            rep.fail(name, sub.failures[0].witness)
    lhs = bimod.associator(C, C, C) @ _wr(c.delta, C) @ c.delta
    rhs = _wl(C, c.delta) @ c.delta
    rep.compare("coassociative", lhs.matrix, rhs.matrix)
    ident = Matrix.identity(C.field, C.dim)
    rep.compare("counit-right", (bimod.right_unitor(C) @ _wl(C, c.counit) @ c.delta).matrix, ident)
    rep.compare("counit-left", (bimod.left_unitor(C) @ _wr(c.counit, C) @ c.delta).matrix, ident)
    return rep


@dataclass(frozen=True)
class Comodule:
    """A right comodule; the carrier is an (R, A)-bimodule for some algebra R."""

    coring: Coring
    carrier: Bimodule
    coaction: BimoduleMap
    name: str | None = field(default=None, compare=False)

    @property
    def label(self):
        return self.name or self.carrier.label


def validate_comodule(x: Comodule) -> Report:
    rep = Report(f"comodule {x.label}")
    c, X = x.coring, x.carrier
    C = c.carrier
    if X.right != c.base:
        rep.error("typing", "carrier is not a right module over the coring base")
        return rep
    if x.coaction.source != X or x.coaction.target != tensor_over(X, C):
        rep.error("typing", "coaction has the wrong type")
        return rep
    sub = bimod.validate_map(x.coaction)
    if sub.passed:
        rep.ok("coaction-bilinear")
    else:
        rep.fail("coaction-bilinear", sub.failures[0].witness)
    rho = x.coaction
    lhs = bimod.associator(X, C, C) @ _wr(rho, C) @ rho
    rhs = _wl(X, c.delta) @ rho
    rep.compare("coassociative", lhs.matrix, rhs.matrix)
    rep.compare(
        "counit",
        (bimod.right_unitor(X) @ _wl(X, c.counit) @ rho).matrix,
        Matrix.identity(X.field, X.dim),
    )
    return rep


def trivial_comodule(carrier: Bimodule, name=None) -> Comodule:
    """A right module as a comodule over the trivial coring of its right algebra."""
    return Comodule(trivial_coring(carrier.right), carrier, bimod.right_unitor_inv(carrier), name)


def cofree_comodule(c: Coring, y: Bimodule | None = None, name=None) -> Comodule:
    """``Y (x) C`` with coaction ``Y (x) Delta``; ``Y = None`` gives ``C`` itself."""
    C = c.carrier
    if y is None:
        return Comodule(c, C, c.delta, name or f"cofree {c.label}")
    yc = tensor_over(y, C)
    coaction = _then(_wl(y, c.delta), _rb(tensor_over(y, tensor_over(C, C)), tensor_over(yc, C)))
    return Comodule(c, yc, coaction, name or f"{y.label}*{c.label}")


def comodule_sum(x: Comodule, y: Comodule, name=None) -> Comodule:
    if x.coring != y.coring:
        raise InvalidInput("comodules over different corings")
    C = x.coring.carrier
    s = bimod.direct_sum(x.carrier, y.carrier)
    i1, i2 = bimod.sum_injections(x.carrier, y.carrier, s)
    p1, p2 = bimod.sum_projections(x.carrier, y.carrier, s)
    co = _wr(i1, C) @ x.coaction @ p1
    co = co + _wr(i2, C) @ y.coaction @ p2
    return Comodule(x.coring, s, co, name or f"({x.label}+{y.label})")


def comodule_injections(x: Comodule, y: Comodule, s: Comodule):
    return bimod.sum_injections(x.carrier, y.carrier, s.carrier)


def is_colinear(f: BimoduleMap, x: Comodule, y: Comodule) -> dict | None:
    """Witness that ``f: x -> y`` is not colinear, or ``None``."""
    C = x.coring.carrier
    lhs = y.coaction @ f
    rhs = _wr(f, C) @ x.coaction
    return diff_witness(lhs.matrix, rhs.matrix, "colinear")


def colinear_maps(x: Comodule, y: Comodule) -> list[BimoduleMap]:
    """A basis of the colinear bimodule maps ``x -> y`` (empty across left algebras)."""
    if x.carrier.left != y.carrier.left:
        return []
    basis = bimod.hom_basis(x.carrier, y.carrier)
    if not basis:
        return []
    C = x.coring.carrier
    images = []
    for g in basis:
        d = y.coaction @ g - _wr(g, C) @ x.coaction
        images.append(d.matrix.vec())
    kb = kernel_basis(Matrix(x.carrier.field, images).T)
    out = []
    for k in range(kb.cols):
        out.append(bimod.combine_maps(kb.a[:, k], basis, x.carrier, y.carrier))
    return out


@dataclass(frozen=True)
class Bicomodule:
    """``M`` over (A, B) with a left ``left``-coaction and a right ``right``-coaction."""

    left: Coring
    right: Coring
    carrier: Bimodule
    rho: BimoduleMap  # M -> M (x) D
    lam: BimoduleMap  # M -> C (x) M
    name: str | None = field(default=None, compare=False)

    @property
    def label(self):
        return self.name or self.carrier.label


def right_bicomodule(carrier: Bimodule, right: Coring, rho: BimoduleMap, name=None) -> Bicomodule:
    """An (A, D)-bicomodule: trivial left structure over ``A = carrier.left``."""
    return Bicomodule(trivial_coring(carrier.left), right, carrier, rho, bimod.left_unitor_inv(carrier), name)


def validate_bicomodule(b: Bicomodule) -> Report:
    rep = Report(f"bicomodule {b.label}")
    M, C, D = b.carrier, b.left.carrier, b.right.carrier
    if M.left != b.left.base or M.right != b.right.base:
        rep.error("typing", "carrier does not match the coring bases")
        return rep
    if b.rho.source != M or b.rho.target != tensor_over(M, D) or b.lam.source != M or b.lam.target != tensor_over(C, M):
        rep.error("typing", "coactions have the wrong type")
        return rep
    for name, g in (("rho-bilinear", b.rho), ("lambda-bilinear", b.lam)):
        sub = bimod.validate_map(g)
        if sub.passed:
            rep.ok(name)
        else:
            rep.fail(name, sub.failures[0].witness)
    rho, lam = b.rho, b.lam
    rep.compare(
        "right-coassociative",
        (bimod.associator(M, D, D) @ _wr(rho, D) @ rho).matrix,
        (_wl(M, b.right.delta) @ rho).matrix,
    )
    ident = Matrix.identity(M.field, M.dim)
    rep.compare("right-counit", (bimod.right_unitor(M) @ _wl(M, b.right.counit) @ rho).matrix, ident)
    rep.compare(
        "left-coassociative",
        (_wl(C, lam) @ lam).matrix,
        (bimod.associator(C, C, M) @ _wr(b.left.delta, M) @ lam).matrix,
    )
    rep.compare("left-counit", (bimod.left_unitor(M) @ _wr(b.left.counit, M) @ lam).matrix, ident)
    rep.compare(
        "compatible",
        (bimod.associator(C, M, D) @ _wr(lam, D) @ rho).matrix,
        (_wl(C, rho) @ lam).matrix,
    )
    return rep


# ----------------------------------------------------------------------------
# entwined cells


@dataclass(frozen=True)
class EntwinedCell:
    """A 1-cell ``(M, m)`` from ``source = (D : B)`` to ``target = (C : A)``."""

    source: Coring
    target: Coring
    carrier: Bimodule
    m: BimoduleMap
    name: str | None = field(default=None, compare=False)

    @property
    def label(self):
        return self.name or self.carrier.label


@dataclass(frozen=True)
class EntwinedTwoCell:
    """A reduced 2-cell ``C (x) M -> M'`` between cells with the same ends."""

    source: EntwinedCell
    target: EntwinedCell
    map: BimoduleMap

    @property
    def field(self):
        return self.map.field


def check_entwined_cell(cell: EntwinedCell) -> Report:
    """Counit and comultiplication compatibility of the entwining map."""
    rep = Report(f"cell {cell.label}")
    C, D, M = cell.target.carrier, cell.source.carrier, cell.carrier
    if M.left != cell.target.base or M.right != cell.source.base:
        rep.error("typing", "carrier does not match the coring bases")
        return rep
    if cell.m.source != tensor_over(C, M) or cell.m.target != tensor_over(M, D):
        rep.error("typing", "entwining map has the wrong type")
        return rep
    sub = bimod.validate_map(cell.m)
    if sub.passed:
        rep.ok("bilinear")
    else:
        rep.fail("bilinear", sub.failures[0].witness)
    m = cell.m
    lhs = _wl(M, cell.source.counit) @ m
    rhs = bimod.iota(M) @ _wr(cell.target.counit, M)
    rep.compare("counit", lhs.matrix, rhs.matrix)
    cm = tensor_over(C, M)
    cc_m = tensor_over(tensor_over(C, C), M)
    lhs = _then(
        _wr(cell.target.delta, M),
        _rb(cc_m, tensor_over(C, cm)),
        _wl(C, m),
        _rb(tensor_over(C, tensor_over(M, D)), tensor_over(tensor_over(C, M), D)),
        _wr(m, D),
        _rb(tensor_over(tensor_over(M, D), D), tensor_over(M, tensor_over(D, D))),
    )
    rhs = _wl(M, cell.source.delta) @ m
    rep.compare("comultiplication", lhs.matrix, rhs.matrix)
    return rep


def identity_cell(c: Coring) -> EntwinedCell:
    """``(A, iota_C^{-1})``."""
    return EntwinedCell(c, c, unit_bimodule(c.base), bimod.iota_inv(c.carrier), f"I{c.label}")


def cell_from_bicomodule(b: Bicomodule, target: Coring | None = None) -> EntwinedCell:
    """The entwining ``C (x) M -> C (x) (M (x) D) -> A (x) (M (x) D) -> M (x) D``.

    ``b`` must be an (A, D)-bicomodule (trivial left structure); ``target``
    is any coring over ``A`` and defaults to the trivial one.
    """
    rep = validate_bicomodule(b)
    if not rep.passed:
        raise InvalidInput(f"invalid bicomodule: {rep.failures[0].name}")
    if not is_trivial(b.left):
        raise InvalidInput("the left coring of the bicomodule must be trivial")
    target = target or b.left
    if target.base != b.carrier.left:
        raise InvalidInput("target coring is over a different algebra")
    M, D = b.carrier, b.right.carrier
    md = tensor_over(M, D)
    m = _then(_wl(target.carrier, b.rho), _wr(target.counit, md), bimod.left_unitor(md))
    return EntwinedCell(b.right, target, M, m, b.name)


def lift(c: Coring, phi: BimoduleMap) -> BimoduleMap:
    """``C (x) X -> A (x) X -> X -> Y`` for ``phi: X -> Y``."""
    X = phi.source
    return _then(_wr(c.counit, X), bimod.left_unitor(X), phi)


def check_two_cell(a: EntwinedTwoCell) -> Report:
    """Bilinearity and compatibility with the entwining maps."""
    rep = Report("two-cell")
    s, t = a.source, a.target
    if s.source != t.source or s.target != t.target:
        rep.error("typing", "cells have different ends")
        return rep
    c, d = s.target, s.source
    C, D, M, M2 = c.carrier, d.carrier, s.carrier, t.carrier
    if a.map.source != tensor_over(C, M) or a.map.target != M2:
        rep.error("typing", "reduced map has the wrong type")
        return rep
    sub = bimod.validate_map(a.map)
    if sub.passed:
        rep.ok("bilinear")
    else:
        rep.fail("bilinear", sub.failures[0].witness)
    split = _then(_wr(c.delta, M), _rb(tensor_over(tensor_over(C, C), M), tensor_over(C, tensor_over(C, M))))
    lhs = _then(split, _wl(C, a.map), t.m)
    rhs = _then(
        split,
        _wl(C, s.m),
        _rb(tensor_over(C, tensor_over(M, D)), tensor_over(tensor_over(C, M), D)),
        _wr(a.map, D),
    )
    rep.compare("entwining", lhs.matrix, rhs.matrix)
    return rep


def rem_id2(cell: EntwinedCell) -> EntwinedTwoCell:
    return EntwinedTwoCell(cell, cell, lift(cell.target, identity(cell.carrier)))


def lift_two_cell(src: EntwinedCell, tgt: EntwinedCell, phi: BimoduleMap) -> EntwinedTwoCell:
    return EntwinedTwoCell(src, tgt, lift(src.target, phi))


def rem_compose(a2: EntwinedTwoCell, a1: EntwinedTwoCell) -> EntwinedTwoCell:
    """``a2 o a1 = a2 (C (x) a1) (Delta (x) M)``."""
    if a1.target != a2.source:
        raise NotComposable("2-cells are not vertically composable")
    c = a1.source.target
    C, M = c.carrier, a1.source.carrier
    mp = _then(
        _wr(c.delta, M),
        _rb(tensor_over(tensor_over(C, C), M), tensor_over(C, tensor_over(C, M))),
        _wl(C, a1.map),
        a2.map,
    )
    return EntwinedTwoCell(a1.source, a2.target, mp)


def rem_hcompose(x: EntwinedCell, w: EntwinedCell) -> EntwinedCell:
    """``(M (x) W, (M (x) w)(m (x) W))`` with the rebracketings written out."""
    if x.source != w.target:
        raise NotComposable("cells are not composable")
    C, D, E = x.target.carrier, x.source.carrier, w.source.carrier
    M, W = x.carrier, w.carrier
    mw = tensor_over(M, W)
    mp = _then(
        _rb(tensor_over(C, mw), tensor_over(tensor_over(C, M), W)),
        _wr(x.m, W),
        _rb(tensor_over(tensor_over(M, D), W), tensor_over(M, tensor_over(D, W))),
        _wl(M, w.m),
        _rb(tensor_over(M, tensor_over(W, E)), tensor_over(mw, E)),
    )
    return EntwinedCell(w.source, x.target, mw, mp)


def rem_hcompose2(a: EntwinedTwoCell, b: EntwinedTwoCell) -> EntwinedTwoCell:
    """``ab = (M' (x) b)(m' (x) W)(C (x) a (x) W)(Delta (x) M (x) W)``."""
    x, x2, w, w2 = a.source, a.target, b.source, b.target
    c = x.target
    C, D = c.carrier, x.source.carrier
    M, M2, W = x.carrier, x2.carrier, w.carrier
    mp = _then(
        _wr(c.delta, tensor_over(M, W)),
        _rb(tensor_over(tensor_over(C, C), tensor_over(M, W)), tensor_over(tensor_over(C, tensor_over(C, M)), W)),
        _wr(_wl(C, a.map), W),
        _wr(x2.m, W),
        _rb(tensor_over(tensor_over(M2, D), W), tensor_over(M2, tensor_over(D, W))),
        _wl(M2, b.map),
    )
    return EntwinedTwoCell(rem_hcompose(x, w), rem_hcompose(x2, w2), mp)


rem_vcompose = rem_hcompose2


def rem_unitors(cell: EntwinedCell):
    """Left and right unitors of a cell as reduced 2-cells."""
    left_src = rem_hcompose(identity_cell(cell.target), cell)
    right_src = rem_hcompose(cell, identity_cell(cell.source))
    left = lift_two_cell(left_src, cell, bimod.left_unitor(cell.carrier))
    right = lift_two_cell(right_src, cell, bimod.right_unitor(cell.carrier))
    return left, right


def rem_unitor_inverses(cell: EntwinedCell):
    left_src = rem_hcompose(identity_cell(cell.target), cell)
    right_src = rem_hcompose(cell, identity_cell(cell.source))
    left = lift_two_cell(cell, left_src, bimod.left_unitor_inv(cell.carrier))
    right = lift_two_cell(cell, right_src, bimod.right_unitor_inv(cell.carrier))
    return left, right


def rem_two_cell_basis(src: EntwinedCell, tgt: EntwinedCell) -> list[EntwinedTwoCell]:
    """A basis of the reduced 2-cells ``src -> tgt``."""
    c, d = src.target, src.source
    C, D, M = c.carrier, d.carrier, src.carrier
    cm = tensor_over(C, M)
    maps = bimod.hom_basis(cm, tgt.carrier)
    if not maps:
        return []
    images = []
    for g in maps:
        sub = EntwinedTwoCell(src, tgt, g)
        images.append(_entwining_defect(sub).matrix.vec())
    kb = kernel_basis(Matrix(M.field, images).T)
    out = []
    for k in range(kb.cols):
        out.append(EntwinedTwoCell(src, tgt, bimod.combine_maps(kb.a[:, k], maps, cm, tgt.carrier)))
    return out


def _entwining_defect(a: EntwinedTwoCell) -> BimoduleMap:
    s, t = a.source, a.target
    c = s.target
    C, D, M = c.carrier, s.source.carrier, s.carrier
    split = _then(_wr(c.delta, M), _rb(tensor_over(tensor_over(C, C), M), tensor_over(C, tensor_over(C, M))))
    lhs = _then(split, _wl(C, a.map), t.m)
    rhs = _then(
        split,
        _wl(C, s.m),
        _rb(tensor_over(C, tensor_over(M, D)), tensor_over(tensor_over(C, M), D)),
        _wr(a.map, D),
    )
    return lhs - rhs


class REMInstance(Bicategory):
    """Corings, entwined cells and reduced 2-cells."""

    name = "REM(Bim)"

    def source(self, x):
        return x.source

    def target(self, x):
        return x.target

    def id1(self, c):
        return identity_cell(c)

    def hcomp1(self, x, w):
        return rem_hcompose(x, w)

    def id2(self, x):
        return rem_id2(x)

    def hcomp2(self, a, b):
        return rem_hcompose2(a, b)

    def vcomp(self, a2, a1):
        return rem_compose(a2, a1)

    def dom(self, a):
        return a.source

    def cod(self, a):
        return a.target

    def associator(self, x, y, z):
        src = rem_hcompose(rem_hcompose(x, y), z)
        tgt = rem_hcompose(x, rem_hcompose(y, z))
        return lift_two_cell(src, tgt, bimod.associator(x.carrier, y.carrier, z.carrier))

    def associator_inv(self, x, y, z):
        src = rem_hcompose(x, rem_hcompose(y, z))
        tgt = rem_hcompose(rem_hcompose(x, y), z)
        return lift_two_cell(src, tgt, bimod.associator_inv(x.carrier, y.carrier, z.carrier))

    def lunitor(self, x):
        return rem_unitors(x)[0]

    def runitor(self, x):
        return rem_unitors(x)[1]

    def lunitor_inv(self, x):
        return rem_unitor_inverses(x)[0]

    def runitor_inv(self, x):
        return rem_unitor_inverses(x)[1]

    def diff2(self, a, b, cell=None):
        if a.source != b.source or a.target != b.target:
            return {"cell": cell, "reason": "type"}
        return diff_witness(a.map.matrix, b.map.matrix, cell)

    def difference(self, a, b):
        return a.map.matrix - b.map.matrix

    def is_2cell(self, a):
        return check_two_cell(a)

    def hom_basis(self, x, y):
        return rem_two_cell_basis(x, y)

    def cell_vector(self, a):
        return a.map.matrix.vec()

    def combine(self, coeffs, cells, x, y):
        c = x.target
        cm = tensor_over(c.carrier, x.carrier)
        return EntwinedTwoCell(x, y, bimod.combine_maps(coeffs, [a.map for a in cells], cm, y.carrier))


# ----------------------------------------------------------------------------
# contexts over entwined cells, unfolded


def wrem_parts(ctx: WideContext):
    x, y = ctx.f, ctx.g
    if x.source != y.target or x.target != y.source:
        raise InvalidInput("cells are not opposed")
    return x, y, x.target, x.source


def wrem_equations(ctx: WideContext):
    """Both sides of the four cell equations, as bimodule maps.

    Orientation: the side through the entwining maps is listed first.  The
    first two equations land in ``A (x) C`` and are moved to ``C (x) A`` by
    ``iota_C`` (resp. ``iota_D``) on that side.
    """
    x, y, c, d = wrem_parts(ctx)
    C, D, M, N = c.carrier, d.carrier, x.carrier, y.carrier
    eta, rho = ctx.eta.map, ctx.rho.map
    T = tensor_over
    mn, nm = T(M, N), T(N, M)
    out = {}

    def first(core, dcor, P, Q, pm, qn, cell2):
        # core (x) (P (x) Q) -> core (x) ((core (x) P) (x) Q) -> ... -> (core (x) (P Q)) (x) core
        K, L = core.carrier, dcor.carrier
        pq = T(P, Q)
        split = _then(_wr(core.delta, pq), _rb(T(T(K, K), pq), T(K, T(T(K, P), Q))))
        lhs = _then(
            split,
            _wl(K, _wr(pm, Q)),
            _wl(K, _rb(T(T(P, L), Q), T(P, T(L, Q)))),
            _wl(K, _wl(P, qn)),
            _rb(T(K, T(P, T(Q, K))), T(T(K, pq), K)),
            _wr(cell2, K),
            bimod.iota(K),
        )
        rhs = _then(_wr(core.delta, pq), _rb(T(T(K, K), pq), T(K, T(K, pq))), _wl(K, cell2))
        return lhs, rhs

    out["eta-entwining"] = first(c, d, M, N, x.m, y.m, eta)
    out["rho-entwining"] = first(d, c, N, M, y.m, x.m, rho)

    def second(core, other, P, Q, pm, cell_other, cell_core):
        # core (x) ((P Q) P): through the entwining and cell_other, versus iota_P (cell_core (x) P)
        K, L = core.carrier, other.carrier
        src = T(K, T(T(P, Q), P))
        lhs = _then(
            _rb(src, T(T(K, P), T(Q, P))),
            _wr(pm, T(Q, P)),
            _rb(T(T(P, L), T(Q, P)), T(P, T(L, T(Q, P)))),
            _wl(P, cell_other),
        )
        rhs = _then(_rb(src, T(T(K, T(P, Q)), P)), _wr(cell_core, P), bimod.iota(P))
        return lhs, rhs

    out["f-side"] = second(c, d, M, N, x.m, rho, eta)
    out["g-side"] = second(d, c, N, M, y.m, eta, rho)
    return out


def check_wrem_context(ctx: WideContext) -> Report:
    """The four unfolded equations, plus validity of both cells."""
    x, y, c, d = wrem_parts(ctx)
    rep = Report("wrem-context")
    for name, cell in (("cell-f", x), ("cell-g", y)):
        sub = check_entwined_cell(cell)
        if sub.passed:
            rep.ok(name)
        else:
            bad = sub.failures[0]
            rep.fail(name, {"check": bad.name, **(bad.witness or {})})
    T = tensor_over
    want_eta = (T(c.carrier, T(x.carrier, y.carrier)), unit_bimodule(c.base))
    want_rho = (T(d.carrier, T(y.carrier, x.carrier)), unit_bimodule(d.base))
    if (ctx.eta.map.source, ctx.eta.map.target) != want_eta or (ctx.rho.map.source, ctx.rho.map.target) != want_rho:
        raise InvalidInput("eta or rho is not typed as C (x) M (x) N -> A, D (x) N (x) M -> B")
    for name, g in (("eta-bilinear", ctx.eta.map), ("rho-bilinear", ctx.rho.map)):
        sub = bimod.validate_map(g)
        if sub.passed:
            rep.ok(name)
        else:
            rep.fail(name, sub.failures[0].witness)
    for name, (lhs, rhs) in wrem_equations(ctx).items():
        rep.compare(name, lhs.matrix, rhs.matrix)
    return rep


def wrem_context(x: EntwinedCell, y: EntwinedCell, eta: BimoduleMap, rho: BimoduleMap) -> WideContext:
    """Wrap reduced maps ``eta``, ``rho`` as 2-cells into the identity cells."""
    return WideContext(
        x,
        y,
        EntwinedTwoCell(rem_hcompose(x, y), identity_cell(x.target), eta),
        EntwinedTwoCell(rem_hcompose(y, x), identity_cell(x.source), rho),
    )


def identity_wrem_context(c: Coring) -> WideContext:
    i = identity_cell(c)
    left, right = rem_unitors(i)
    return WideContext(i, i, right, left)


def trivial_cell(m: Bimodule) -> EntwinedCell:
    """``(M, iota_M)`` between trivial corings."""
    return EntwinedCell(trivial_coring(m.right), trivial_coring(m.left), m, bimod.iota(m), m.label)


def classical_to_wrem(ctx: WideContext) -> WideContext:
    """A context of bimodules as a context of entwined cells over trivial corings."""
    f, g = ctx.f, ctx.g
    x, y = trivial_cell(f), trivial_cell(g)
    eta = ctx.eta @ bimod.left_unitor(tensor_over(f, g))
    rho = ctx.rho @ bimod.left_unitor(tensor_over(g, f))
    return wrem_context(x, y, eta, rho)


def wrem_to_classical(ctx: WideContext) -> WideContext:
    x, y, c, d = wrem_parts(ctx)
    if not (is_trivial(c) and is_trivial(d)):
        raise InvalidInput("only contexts over trivial corings come from bimodule contexts")
    if x.m != bimod.iota(x.carrier) or y.m != bimod.iota(y.carrier):
        raise InvalidInput("entwining maps are not the canonical ones")
    f, g = x.carrier, y.carrier
    eta = ctx.eta.map @ bimod.left_unitor_inv(tensor_over(f, g))
    rho = ctx.rho.map @ bimod.left_unitor_inv(tensor_over(g, f))
    return WideContext(f, g, eta, rho)


CLASSICAL_PAIRING = {"f-side": "f-side", "g-side": "g-side"}


def transported_differences(classical: WideContext, unfolded: Report) -> dict:
    """Move the f-side and g-side differences of an unfolded report into classical coordinates.

    For a context ``(f, g, eta, rho)`` of bimodules the f-side difference on
    ``A (x) ((f g) f)`` is carried to ``(f g) f -> f`` by ``r_f`` on the left
    and the inverse left unitor on the right; the result is the f-side
    difference of the classical check.  Likewise for the g-side.
    """
    f, g = classical.f, classical.g
    out = {}
    for cname, uname, p, q in (("f-side", "f-side", f, g), ("g-side", "g-side", g, f)):
        diff = unfolded.get(uname).difference
        dom = tensor_over(tensor_over(p, q), p)
        out[cname] = bimod.right_unitor(p).matrix @ diff @ bimod.left_unitor_inv(dom).matrix
    return out


def context_pairings(x: EntwinedCell, y: EntwinedCell) -> list[tuple[BimoduleMap, BimoduleMap]]:
    """A basis of the pairs ``(eta, rho)`` making ``(x, y, eta, rho)`` a context.

    All four cell equations are linear in the pair, so this is a kernel.
    """
    c, d = x.target, x.source
    M, N = x.carrier, y.carrier
    e_src, r_src = tensor_over(c.carrier, tensor_over(M, N)), tensor_over(d.carrier, tensor_over(N, M))
    e_tgt, r_tgt = unit_bimodule(c.base), unit_bimodule(d.base)
    e_basis, r_basis = bimod.hom_basis(e_src, e_tgt), bimod.hom_basis(r_src, r_tgt)
    e_zero, r_zero = bimod.zero_map(e_src, e_tgt), bimod.zero_map(r_src, r_tgt)
    trial = [(g, r_zero) for g in e_basis] + [(e_zero, g) for g in r_basis]
    if not trial:
        return []
    cols = []
    for eta, rho in trial:
        eqs = wrem_equations(wrem_context(x, y, eta, rho))
        parts = [(lhs - rhs).matrix.vec() for lhs, rhs in eqs.values()]
        cols.append([v for p in parts for v in p])
    kb = kernel_basis(Matrix(M.field, cols).T)
    out = []
    ne = len(e_basis)
    for k in range(kb.cols):
        v = kb.a[:, k]
        out.append((
            bimod.combine_maps(v[:ne], e_basis, e_src, e_tgt),
            bimod.combine_maps(v[ne:], r_basis, r_src, r_tgt),
        ))
    return out
