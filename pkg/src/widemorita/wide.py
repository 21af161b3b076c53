"""Wide right Morita contexts over any :class:`~widemorita.bicat.Bicategory`.

A context from ``B`` to ``A`` is ``(f, g, eta, rho)`` with ``f: B -> A``,
``g: A -> B``, ``eta: f g => I_A`` and ``rho: g f => I_B``.  Contexts and
their morphisms form again a bicategory, :class:`WInstance`.
"""

from __future__ import annotations

from dataclasses import dataclass

from .bicat import Bicategory, NotComposable
from .exactla import Matrix, hstack, kernel_basis, solve_linear
from .report import Report


class ContextTypeError(TypeError):
    """Cells of a context or morphism are not typed as required."""


class PreconditionError(ValueError):
    pass


class NoSolution(ValueError):
    pass


class NonUniqueSolution(ValueError):
    def __init__(self, msg, dimension):
        super().__init__(msg)
        self.dimension = dimension


class ConsistencyError(AssertionError):
    """A surjective structure map failed to be invertible."""


@dataclass(frozen=True)
class WideContext:
    f: object
    g: object
    eta: object
    rho: object


@dataclass(frozen=True)
class ContextMorphism:
    alpha: object
    beta: object
    source: WideContext
    target: WideContext


def context_source(inst: Bicategory, ctx: WideContext):
    return inst.source(ctx.f)


def context_target(inst: Bicategory, ctx: WideContext):
    return inst.target(ctx.f)


def _record(rep: Report, inst, name, lhs, rhs, side=None):
    w = inst.diff2(lhs, rhs, name)
    diff = inst.difference(lhs, rhs) if hasattr(inst, "difference") else None
    if w is None:
        rep.ok(name)
        rep.findings[-1].difference = diff
        return True
    if side is not None:
        w = {"side": side, **w}
    rep.fail(name, w, difference=diff)
    return False


def _expect(cond: bool, msg: str):
    if not cond:
        raise ContextTypeError(msg)


def check_context_types(inst: Bicategory, ctx: WideContext):
    f, g = ctx.f, ctx.g
    a, b = inst.target(f), inst.source(f)
    _expect(inst.source(g) == a and inst.target(g) == b, "g is not opposed to f")
    _expect(inst.same1(inst.dom(ctx.eta), inst.hcomp1(f, g)), "eta does not start at f g")
    _expect(inst.same1(inst.cod(ctx.eta), inst.id1(a)), "eta does not end at the identity of the target")
    _expect(inst.same1(inst.dom(ctx.rho), inst.hcomp1(g, f)), "rho does not start at g f")
    _expect(inst.same1(inst.cod(ctx.rho), inst.id1(b)), "rho does not end at the identity of the source")


def f_side(inst: Bicategory, ctx: WideContext):
    """Both composites ``(f g) f => f``: through ``rho`` and through ``eta``."""
    f, g = ctx.f, ctx.g
    lhs = inst.chain(inst.runitor(f), inst.whisker_left(f, ctx.rho), inst.associator(f, g, f))
    rhs = inst.vcomp(inst.lunitor(f), inst.whisker_right(ctx.eta, f))
    return lhs, rhs


def g_side(inst: Bicategory, ctx: WideContext):
    """Both composites ``(g f) g => g``: through ``eta`` and through ``rho``."""
    f, g = ctx.f, ctx.g
    lhs = inst.chain(inst.runitor(g), inst.whisker_left(g, ctx.eta), inst.associator(g, f, g))
    rhs = inst.vcomp(inst.lunitor(g), inst.whisker_right(ctx.rho, g))
    return lhs, rhs


def check_context(inst: Bicategory, ctx: WideContext, cells: bool = True) -> Report:
    """Evaluate both context diagrams exactly (and validity of eta, rho)."""
    check_context_types(inst, ctx)
    rep = Report("context")
    if cells:
        for name, cell in (("eta-cell", ctx.eta), ("rho-cell", ctx.rho)):
            sub = inst.is_2cell(cell)
            if sub.passed:
                rep.ok(name)
            else:
                bad = sub.failures[0]
                rep.fail(name, {"check": bad.name, **(bad.witness or {})})
    lhs, rhs = f_side(inst, ctx)
    _record(rep, inst, "f-side", lhs, rhs, side="f")
    lhs, rhs = g_side(inst, ctx)
    _record(rep, inst, "g-side", lhs, rhs, side="g")
    return rep


def check_morphism(inst: Bicategory, m: ContextMorphism, src=None, tgt=None) -> Report:
    """The compatibility equations ``eta' (alpha * beta) = eta`` and ``rho' (beta * alpha) = rho``."""
    src = src or m.source
    tgt = tgt or m.target
    _expect(inst.same1(inst.dom(m.alpha), src.f) and inst.same1(inst.cod(m.alpha), tgt.f), "alpha is not f => f'")
    _expect(inst.same1(inst.dom(m.beta), src.g) and inst.same1(inst.cod(m.beta), tgt.g), "beta is not g => g'")
    rep = Report("morphism")
    _record(rep, inst, "eta-compatible", inst.vcomp(tgt.eta, inst.hcomp2(m.alpha, m.beta)), src.eta)
    _record(rep, inst, "rho-compatible", inst.vcomp(tgt.rho, inst.hcomp2(m.beta, m.alpha)), src.rho)
    return rep


def identity_morphism(inst: Bicategory, ctx: WideContext) -> ContextMorphism:
    return ContextMorphism(inst.id2(ctx.f), inst.id2(ctx.g), ctx, ctx)


def compose_morphisms(inst: Bicategory, m2: ContextMorphism, m1: ContextMorphism) -> ContextMorphism:
    """``m2 o m1``, componentwise."""
    if m1.target != m2.source:
        raise NotComposable("morphisms are not vertically composable")
    return ContextMorphism(
        inst.vcomp(m2.alpha, m1.alpha), inst.vcomp(m2.beta, m1.beta), m1.source, m2.target
    )


def product_eta(inst: Bicategory, ctx: WideContext, lam: WideContext):
    """``(f p)(q g) => I_A`` through ``gamma`` then ``eta``."""
    f, g, p, q = ctx.f, ctx.g, lam.f, lam.g
    qg = inst.hcomp1(q, g)
    return inst.chain(
        ctx.eta,
        inst.whisker_left(f, inst.lunitor(g)),
        inst.whisker_left(f, inst.whisker_right(lam.eta, g)),
        inst.whisker_left(f, inst.associator_inv(p, q, g)),
        inst.associator(f, p, qg),
    )


def product_rho(inst: Bicategory, ctx: WideContext, lam: WideContext):
    """``(q g)(f p) => I_C`` through ``rho`` then ``mu``."""
    f, g, p, q = ctx.f, ctx.g, lam.f, lam.g
    fp = inst.hcomp1(f, p)
    return inst.chain(
        lam.rho,
        inst.whisker_left(q, inst.lunitor(p)),
        inst.whisker_left(q, inst.whisker_right(ctx.rho, p)),
        inst.whisker_left(q, inst.associator_inv(g, f, p)),
        inst.associator(q, g, fp),
    )


def multiply_contexts(inst: Bicategory, ctx: WideContext, lam: WideContext) -> WideContext:
    """Product of a context from B to A with one from C to B."""
    if inst.source(ctx.f) != inst.target(lam.f):
        raise NotComposable("contexts do not share the middle 0-cell")
    return WideContext(
        inst.hcomp1(ctx.f, lam.f),
        inst.hcomp1(lam.g, ctx.g),
        product_eta(inst, ctx, lam),
        product_rho(inst, ctx, lam),
    )


def multiply_morphisms(inst: Bicategory, m1: ContextMorphism, m2: ContextMorphism) -> ContextMorphism:
    """``(alpha, beta)(s, t) = (alpha * s, t * beta)``."""
    return ContextMorphism(
        inst.hcomp2(m1.alpha, m2.alpha),
        inst.hcomp2(m2.beta, m1.beta),
        multiply_contexts(inst, m1.source, m2.source),
        multiply_contexts(inst, m1.target, m2.target),
    )


def identity_context(inst: Bicategory, a) -> WideContext:
    i = inst.id1(a)
    return WideContext(i, i, inst.runitor(i), inst.lunitor(i))


def context_associator(inst: Bicategory, ctx, lam, om):
    """``(a_{f,p,u}, a^{-1}_{v,q,g})`` from ``(ctx lam) om`` to ``ctx (lam om)`` and its inverse."""
    f, g, p, q, u, v = ctx.f, ctx.g, lam.f, lam.g, om.f, om.g
    left = multiply_contexts(inst, multiply_contexts(inst, ctx, lam), om)
    right = multiply_contexts(inst, ctx, multiply_contexts(inst, lam, om))
    fwd = ContextMorphism(inst.associator(f, p, u), inst.associator_inv(v, q, g), left, right)
    bwd = ContextMorphism(inst.associator_inv(f, p, u), inst.associator(v, q, g), right, left)
    return fwd, bwd


def context_unitors(inst: Bicategory, ctx: WideContext):
    """Right unitor ``ctx I_B -> ctx`` and left unitor ``I_A ctx -> ctx``.

    The right unitor is ``(r_f, l_g)``; the left unitor is ``(l_f, r_g)``,
    whose first component acts on the f-side as every morphism does.
    """
    a, b = context_target(inst, ctx), context_source(inst, ctx)
    right_src = multiply_contexts(inst, ctx, identity_context(inst, b))
    left_src = multiply_contexts(inst, identity_context(inst, a), ctx)
    right = ContextMorphism(inst.runitor(ctx.f), inst.lunitor(ctx.g), right_src, ctx)
    left = ContextMorphism(inst.lunitor(ctx.f), inst.runitor(ctx.g), left_src, ctx)
    return right, left


def context_unitor_inverses(inst: Bicategory, ctx: WideContext):
    right, left = context_unitors(inst, ctx)
    rinv = ContextMorphism(inst.runitor_inv(ctx.f), inst.lunitor_inv(ctx.g), ctx, right.source)
    linv = ContextMorphism(inst.lunitor_inv(ctx.f), inst.runitor_inv(ctx.g), ctx, left.source)
    return rinv, linv


def left_unitor_orderings(inst: Bicategory, ctx: WideContext) -> Report:
    """Type-check and test both component orderings for the left unitor.

    ``(l_f, r_g)`` puts the f-side component first; ``(l_g, r_f)`` swaps
    them.  Each ordering either fails to type (error) or is tested against
    the compatibility equations.
    """
    a = context_target(inst, ctx)
    src = multiply_contexts(inst, identity_context(inst, a), ctx)
    rep = Report("left-unitor-orderings")
    for name, (x, y) in (
        ("f-first", (inst.lunitor(ctx.f), inst.runitor(ctx.g))),
        ("g-first", (inst.lunitor(ctx.g), inst.runitor(ctx.f))),
    ):
        m = ContextMorphism(x, y, src, ctx)
        try:
            sub = check_morphism(inst, m)
        except ContextTypeError as exc:
            rep.error(name, f"ill-typed: {exc}")
            continue
        if sub.passed:
            rep.ok(name)
        else:
            rep.fail(name, sub.failures[0].witness)
    return rep


# ----------------------------------------------------------------------------
# equivalences and invertibility


@dataclass
class EquivalenceResult:
    context: WideContext
    dimension: int
    report: Report


def _field_of(cell):
    return cell.field


def context_from_equivalence(inst: Bicategory, f, g, eta, theta) -> EquivalenceResult:
    """Complete equivalence data ``(f, g, eta, theta)`` to a context by solving for ``rho``.

    ``rho: g f => I_B`` is the solution of ``1_f * rho = kappa`` where
    ``kappa = r_f^{-1} l_f (eta * 1_f) a^{-1}_{f,g,f}``.  The reported
    dimension is that of ``{(c, t) : sum_i c_i (1_f * rho_i) = t kappa}``
    over a basis ``rho_i`` of the hom space; it is 1 exactly when the
    solution exists and is unique.
    """
    a, b = inst.target(f), inst.source(f)
    _expect(inst.same1(inst.dom(eta), inst.hcomp1(f, g)) and inst.same1(inst.cod(eta), inst.id1(a)), "eta is not f g => I_A")
    _expect(inst.same1(inst.dom(theta), inst.id1(b)) and inst.same1(inst.cod(theta), inst.hcomp1(g, f)), "theta is not I_B => g f")
    for name, cell in (("eta", eta), ("theta", theta)):
        try:
            inst.invert(cell)
        except (ZeroDivisionError, ValueError) as exc:
            raise PreconditionError(f"{name} is not invertible") from exc
    kappa = inst.chain(
        inst.runitor_inv(f),
        inst.lunitor(f),
        inst.whisker_right(eta, f),
        inst.associator_inv(f, g, f),
    )
    gf, ib = inst.hcomp1(g, f), inst.id1(b)
    basis = inst.hom_basis(gf, ib)
    field = _field_of(eta)
    target = Matrix.column(field, inst.cell_vector(kappa))
    if basis:
        cols = [Matrix.column(field, inst.cell_vector(inst.whisker_left(f, r))) for r in basis]
        amat = hstack(cols)
    else:
        amat = Matrix.zeros(field, target.rows, 0)
    dimension = kernel_basis(hstack([amat, -target])).cols
    sol = solve_linear(amat, target)
    if not sol.solvable:
        raise NoSolution("no 2-cell rho solves 1_f * rho = kappa")
    if sol.dimension > 0:
        raise NonUniqueSolution(f"solution space has dimension {dimension}", dimension)
    coeffs = [sol.x[i, 0] for i in range(len(basis))]
    rho = inst.combine(coeffs, basis, gf, ib)
    ctx = WideContext(f, g, eta, rho)
    rep = check_context(inst, ctx)
    rep.ok("solution-dimension", {"dimension": dimension})
    return EquivalenceResult(ctx, dimension, rep)


def check_equivalence_diagrams(inst: Bicategory, f, g, eta) -> Report:
    """``r_{fg} (1 * eta) = l_{fg} (eta * 1)`` on ``(fg)(fg)``."""
    fg = inst.hcomp1(f, g)
    rep = Report("equivalence-diagram")
    lhs = inst.vcomp(inst.runitor(fg), inst.whisker_left(fg, eta))
    rhs = inst.vcomp(inst.lunitor(fg), inst.whisker_right(eta, fg))
    _record(rep, inst, "eta-two-sides", lhs, rhs)
    return rep


@dataclass
class IsoResult:
    report: Report
    eta_inverse: object = None
    rho_inverse: object = None


def epi_implies_iso(inst: Bicategory, ctx: WideContext) -> IsoResult:
    """If ``eta`` and ``rho`` are surjective, invert them and verify both inverses."""
    rep = Report("epi-iso")
    epi_eta, epi_rho = inst.is_epi(ctx.eta), inst.is_epi(ctx.rho)
    rep.ok("eta-surjective" if epi_eta else "eta-not-surjective")
    rep.ok("rho-surjective" if epi_rho else "rho-not-surjective")
    if not (epi_eta and epi_rho):
        rep.ok("skipped", {"reason": "eta or rho is not surjective"})
        return IsoResult(rep)
    inverses = []
    for name, cell in (("eta", ctx.eta), ("rho", ctx.rho)):
        try:
            inv = inst.invert(cell)
        except (ZeroDivisionError, ValueError) as exc:
            raise ConsistencyError(f"{name} is surjective but not invertible") from exc
        _record(rep, inst, f"{name}-left-inverse", inst.vcomp(inv, cell), inst.id2(inst.dom(cell)))
        _record(rep, inst, f"{name}-right-inverse", inst.vcomp(cell, inv), inst.id2(inst.cod(cell)))
        inverses.append(inv)
    if not rep.passed:
        raise ConsistencyError("computed inverse is not two-sided")
    return IsoResult(rep, inverses[0], inverses[1])


# ----------------------------------------------------------------------------
# the bicategory of contexts


class WInstance(Bicategory):
    """Contexts as 1-cells and context morphisms as 2-cells over ``base``."""

    def __init__(self, base: Bicategory):
        self.base = base
        self.name = f"W({base.name})"

    def source(self, ctx):
        return self.base.source(ctx.f)

    def target(self, ctx):
        return self.base.target(ctx.f)

    def id1(self, a):
        return identity_context(self.base, a)

    def hcomp1(self, ctx, lam):
        return multiply_contexts(self.base, ctx, lam)

    def id2(self, ctx):
        return identity_morphism(self.base, ctx)

    def hcomp2(self, m1, m2):
        return multiply_morphisms(self.base, m1, m2)

    def vcomp(self, m2, m1):
        return compose_morphisms(self.base, m2, m1)

    def dom(self, m):
        return m.source

    def cod(self, m):
        return m.target

    def associator(self, x, y, z):
        return context_associator(self.base, x, y, z)[0]

    def associator_inv(self, x, y, z):
        return context_associator(self.base, x, y, z)[1]

    def runitor(self, ctx):
        return context_unitors(self.base, ctx)[0]

    def lunitor(self, ctx):
        return context_unitors(self.base, ctx)[1]

    def runitor_inv(self, ctx):
        return context_unitor_inverses(self.base, ctx)[0]

    def lunitor_inv(self, ctx):
        return context_unitor_inverses(self.base, ctx)[1]

    def diff2(self, m, n, cell=None):
        if m.source != n.source or m.target != n.target:
            return {"cell": cell, "reason": "type"}
        w = self.base.diff2(m.alpha, n.alpha, cell)
        if w is not None:
            return {"component": "alpha", **w}
        w = self.base.diff2(m.beta, n.beta, cell)
        if w is not None:
            return {"component": "beta", **w}
        return None

    def is_2cell(self, m):
        return check_morphism(self.base, m)
