"""Bimodules, bimodule maps and tensor products over algebras.

A tensor ``M (x)_B N`` is realised as a quotient of the ambient space
``M (x)_k N`` (basis index ``i * N.dim + j``) by the middle-action relations
``(m b) (x) n - m (x) (b n)``.  Associators and unitors are computed from
these quotients, so every composite of coherence cells is an explicit matrix.
"""

from __future__ import annotations

from functools import cached_property, lru_cache

import numpy as np

from .algebra import Algebra
from .exactla import (
    Matrix,
    QuotientSpace,
    ShapeError,
    block_diag,
    hstack,
    kernel_basis,
    quotient_space,
    vstack,
)
from .report import Report


class AlgebraMismatch(ValueError):
    """Two cells meet over different algebras."""


class IllDefinedMap(ValueError):
    """An ambient map does not descend to the tensor quotients."""


class NotABimoduleMap(ValueError):
    pass


class Bimodule:
    """An (A, B)-bimodule: left action by ``left``, right action by ``right``.

    ``left_action[i]`` is the matrix of ``x -> e_i x`` and ``right_action[j]``
    the matrix of ``x -> x e_j``.  Equality is structural: leaf bimodules
    compare by their matrices, unit bimodules by their algebra and tensor
    bimodules by their factors.  The name is a label only.
    """

    kind = "leaf"

    def __init__(self, left: Algebra, right: Algebra, left_action, right_action, name=None):
        self.left = left
        self.right = right
        self.left_action = tuple(left_action)
        self.right_action = tuple(right_action)
        if len(self.left_action) != left.dim or len(self.right_action) != right.dim:
            raise ShapeError("one action matrix per basis element is required")
        dims = {m.shape for m in self.left_action + self.right_action}
        if len(dims) > 1:
            raise ShapeError("action matrices have inconsistent shapes")
        if dims:
            (shape,) = dims
            if shape[0] != shape[1]:
                raise ShapeError("action matrices must be square")
            self.dim = shape[0]
        else:
            raise ShapeError("algebras of dimension zero are not supported")
        self.name = name

    @property
    def field(self):
        return self.left.field

    @cached_property
    def key(self):
        return (
            "leaf",
            self.left,
            self.right,
            tuple(m.key for m in self.left_action),
            tuple(m.key for m in self.right_action),
        )

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Bimodule):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self):
        return hash(self.key)

    @property
    def label(self) -> str:
        return self.name or f"M{self.dim}"

    def __repr__(self):
        return f"Bimodule({self.label}, dim={self.dim})"

    def left_matrix(self, coeffs) -> Matrix:
        return _lincomb(self.field, coeffs, self.left_action, self.dim)

    def right_matrix(self, coeffs) -> Matrix:
        return _lincomb(self.field, coeffs, self.right_action, self.dim)

    def is_tensor(self) -> bool:
        return False


def _lincomb(field, coeffs, mats, n):
    out = field.zeros((n, n))
    for c, m in zip(coeffs, mats):
        c = field.coerce(c)
        if c != 0:
            out = out + m.a * c
    return Matrix(field, out)


class UnitBimodule(Bimodule):
    """The algebra as a bimodule over itself: the identity 1-cell."""

    kind = "unit"

    def __init__(self, alg: Algebra):
        super().__init__(alg, alg, alg.left_matrices, alg.right_matrices, name=f"I({alg.name or '?'})")
        self.algebra = alg

    @cached_property
    def key(self):
        return ("unit", self.algebra)


class TensorBimodule(Bimodule):
    """``M (x)_B N`` with its quotient presentation."""

    kind = "tensor"

    def __init__(self, m: Bimodule, n: Bimodule, quotient: QuotientSpace, left_action, right_action):
        self.factors = (m, n)
        self.quotient = quotient
        super().__init__(m.left, n.right, left_action, right_action)

    @cached_property
    def key(self):
        return ("tensor", self.factors[0], self.factors[1])

    @property
    def label(self) -> str:
        return f"({self.factors[0].label}*{self.factors[1].label})"

    @property
    def projection(self) -> Matrix:
        return self.quotient.projection

    @property
    def section(self) -> Matrix:
        return self.quotient.section

    def is_tensor(self) -> bool:
        return True


def leaf_copy(m: Bimodule, name: str | None = None) -> Bimodule:
    """A plain bimodule with the same action matrices (forgets tensor structure)."""
    return Bimodule(m.left, m.right, m.left_action, m.right_action, name or m.label)


@lru_cache(maxsize=None)
def unit_bimodule(alg: Algebra) -> UnitBimodule:
    return UnitBimodule(alg)


def middle_relations(m: Bimodule, n: Bimodule) -> Matrix:
    """Rows spanning the relations ``(x b) (x) y - x (x) (b y)`` in the ambient tensor."""
    f = m.field
    im, in_ = Matrix.identity(f, m.dim), Matrix.identity(f, n.dim)
    blocks = []
    for rb, lb in zip(m.right_action, n.left_action):
        blocks.append((rb.kron(in_) - im.kron(lb)).T)
    return vstack(blocks)


@lru_cache(maxsize=None)
def tensor_over(m: Bimodule, n: Bimodule) -> TensorBimodule:
    """The tensor product of ``m`` and ``n`` over their common middle algebra."""
    if m.right != n.left:
        raise AlgebraMismatch(f"cannot tensor {m.label} and {n.label}: middle algebras differ")
    f = m.field
    q = quotient_space(f, m.dim * n.dim, middle_relations(m, n))
    im, in_ = Matrix.identity(f, m.dim), Matrix.identity(f, n.dim)
    left = [q.projection @ la.kron(in_) @ q.section for la in m.left_action]
    right = [q.projection @ im.kron(ra) @ q.section for ra in n.right_action]
    return TensorBimodule(m, n, q, left, right)


def tensor_chain(*mods: Bimodule) -> Bimodule:
    """Right-nested tensor ``m1 (m2 (m3 ...))``."""
    out = mods[-1]
    for m in reversed(mods[:-1]):
        out = tensor_over(m, out)
    return out


def validate_bimodule(m: Bimodule) -> Report:
    """Check unitality, (anti)multiplicativity and commutation of the actions."""
    rep = Report(f"bimodule {m.label}")
    f = m.field
    ident = Matrix.identity(f, m.dim)
    for side, alg, acts in (("left", m.left, m.left_action), ("right", m.right, m.right_action)):
        rep.compare(f"{side}-unit", _lincomb(f, alg.unit, acts, m.dim), ident)
        bad = None
        for i in range(alg.dim):
            for j in range(alg.dim):
                prod = _lincomb(f, alg.structure[i, j, :], acts, m.dim)
                expect = acts[i] @ acts[j] if side == "left" else acts[j] @ acts[i]
                if prod != expect:
                    bad = (i, j, prod, expect)
                    break
            if bad:
                break
        if bad:
            i, j, prod, expect = bad
            w = _witness(prod, expect)
            w["basis"] = [i, j]
            rep.fail(f"{side}-multiplicative", w)
        else:
            rep.ok(f"{side}-multiplicative")
    bad = None
    for a, la in enumerate(m.left_action):
        for b, rb in enumerate(m.right_action):
            if la @ rb != rb @ la:
                bad = (a, b, la @ rb, rb @ la)
                break
        if bad:
            break
    if bad:
        a, b, x, y = bad
        w = _witness(x, y)
        w["basis"] = [a, b]
        rep.fail("actions-commute", w)
    else:
        rep.ok("actions-commute")
    return rep


def _witness(x, y):
    from .report import diff_witness

    return diff_witness(x, y) or {}


def check_tensor(t: TensorBimodule) -> Report:
    """Quotient invariants and well-definedness of the induced actions."""
    rep = Report(f"tensor {t.label}")
    q = t.quotient
    f = t.field
    m, n = t.factors
    rel = middle_relations(m, n)
    rep.compare("projection-section", q.projection @ q.section, Matrix.identity(f, q.quotient_dim))
    rep.compare("relations-vanish", q.projection @ rel.T, Matrix.zeros(f, q.quotient_dim, rel.rows))
    in_ = Matrix.identity(f, n.dim)
    im = Matrix.identity(f, m.dim)
    for i, la in enumerate(m.left_action):
        amb = la.kron(in_)
        rep.compare(f"left-action-{i}-descends", q.projection @ amb @ rel.T, Matrix.zeros(f, q.quotient_dim, rel.rows))
    for j, ra in enumerate(n.right_action):
        amb = im.kron(ra)
        rep.compare(f"right-action-{j}-descends", q.projection @ amb @ rel.T, Matrix.zeros(f, q.quotient_dim, rel.rows))
    return rep


class BimoduleMap:
    """A bilinear map ``source -> target`` given by a ``target.dim x source.dim`` matrix."""

    __slots__ = ("source", "target", "matrix", "__dict__")

    def __init__(self, source: Bimodule, target: Bimodule, matrix: Matrix, check: bool = False):
        if matrix.shape != (target.dim, source.dim):
            raise ShapeError(
                f"map matrix has shape {matrix.shape}, expected {(target.dim, source.dim)}"
            )
        self.source = source
        self.target = target
        self.matrix = matrix
        if check:
            rep = validate_map(self)
            if not rep.passed:
                raise NotABimoduleMap(repr(rep.failures[0].witness))

    @property
    def field(self):
        return self.matrix.field

    def __matmul__(self, other: "BimoduleMap") -> "BimoduleMap":
        """Composition ``self o other``."""
        if other.target is not self.source and other.target != self.source:
            raise AlgebraMismatch(
                f"cannot compose {other.source.label}->{other.target.label} with "
                f"{self.source.label}->{self.target.label}"
            )
        return BimoduleMap(other.source, self.target, self.matrix @ other.matrix)

    def __add__(self, other):
        _same_type(self, other)
        return BimoduleMap(self.source, self.target, self.matrix + other.matrix)

    def __sub__(self, other):
        _same_type(self, other)
        return BimoduleMap(self.source, self.target, self.matrix - other.matrix)

    def scale(self, c) -> "BimoduleMap":
        return BimoduleMap(self.source, self.target, self.matrix.scale(c))

    def __eq__(self, other):
        if not isinstance(other, BimoduleMap):
            return NotImplemented
        return (
            self.matrix == other.matrix
            and self.source == other.source
            and self.target == other.target
        )

    def __hash__(self):
        return hash((self.source, self.target, self.matrix))

    def __repr__(self):
        return f"BimoduleMap({self.source.label} -> {self.target.label})"

    def is_surjective(self) -> bool:
        return self.matrix.rank() == self.target.dim

    def is_injective(self) -> bool:
        return self.matrix.rank() == self.source.dim

    def is_invertible(self) -> bool:
        return self.source.dim == self.target.dim and self.is_surjective()

    def inverse(self) -> "BimoduleMap":
        return BimoduleMap(self.target, self.source, self.matrix.inverse())


def _same_type(a: BimoduleMap, b: BimoduleMap):
    if a.source != b.source or a.target != b.target:
        raise AlgebraMismatch("maps have different types")


def identity(m: Bimodule) -> BimoduleMap:
    return BimoduleMap(m, m, Matrix.identity(m.field, m.dim))


def zero_map(src: Bimodule, tgt: Bimodule) -> BimoduleMap:
    return BimoduleMap(src, tgt, Matrix.zeros(src.field, tgt.dim, src.dim))


def validate_map(f: BimoduleMap) -> Report:
    """Check that ``f`` commutes with both actions."""
    rep = Report(f"map {f.source.label}->{f.target.label}")
    s, t = f.source, f.target
    if s.left != t.left or s.right != t.right:
        rep.error("typing", "source and target are over different algebras")
        return rep
    for side, sa, ta in (("left", s.left_action, t.left_action), ("right", s.right_action, t.right_action)):
        bad = None
        for i, (x, y) in enumerate(zip(sa, ta)):
            lhs, rhs = f.matrix @ x, y @ f.matrix
            if lhs != rhs:
                bad = (i, lhs, rhs)
                break
        if bad:
            w = _witness(bad[1], bad[2])
            w["basis"] = bad[0]
            rep.fail(f"{side}-linear", w)
        else:
            rep.ok(f"{side}-linear")
    return rep


def induced_map(f: BimoduleMap, g: BimoduleMap, src=None, dst=None, check: bool = True) -> BimoduleMap:
    """``f (x) g`` on the tensor quotients."""
    src = src or tensor_over(f.source, g.source)
    dst = dst or tensor_over(f.target, g.target)
    amb = f.matrix.kron(g.matrix)
    if check:
        rel = src.quotient.relation_basis
        if rel.rows:
            leak = dst.projection @ amb @ rel.T
            if not leak.is_zero():
                raise IllDefinedMap(f"{f!r} (x) {g!r} does not preserve the tensor relations")
    return BimoduleMap(src, dst, dst.projection @ amb @ src.section)


hcomp = induced_map


def whisker_left(m: Bimodule, g: BimoduleMap) -> BimoduleMap:
    """``m (x) g``."""
    return induced_map(identity(m), g)


def whisker_right(f: BimoduleMap, n: Bimodule) -> BimoduleMap:
    """``f (x) n``."""
    return induced_map(f, identity(n))


@lru_cache(maxsize=None)
def associator(m: Bimodule, n: Bimodule, p: Bimodule) -> BimoduleMap:
    """``(m n) p -> m (n p)`` through the ambient triple tensor."""
    mn, np_ = tensor_over(m, n), tensor_over(n, p)
    src, dst = tensor_over(mn, p), tensor_over(m, np_)
    f = m.field
    amb = mn.section.kron(Matrix.identity(f, p.dim)) @ src.section
    mat = dst.projection @ Matrix.identity(f, m.dim).kron(np_.projection) @ amb
    return BimoduleMap(src, dst, mat)


@lru_cache(maxsize=None)
def associator_inv(m: Bimodule, n: Bimodule, p: Bimodule) -> BimoduleMap:
    """``m (n p) -> (m n) p``, built symmetrically."""
    mn, np_ = tensor_over(m, n), tensor_over(n, p)
    src, dst = tensor_over(m, np_), tensor_over(mn, p)
    f = m.field
    amb = Matrix.identity(f, m.dim).kron(np_.section) @ src.section
    mat = dst.projection @ mn.projection.kron(Matrix.identity(f, p.dim)) @ amb
    return BimoduleMap(src, dst, mat)


@lru_cache(maxsize=None)
def left_unitor(m: Bimodule) -> BimoduleMap:
    """``A (x)_A m -> m``, the left action."""
    t = tensor_over(unit_bimodule(m.left), m)
    amb = hstack(list(m.left_action))
    return BimoduleMap(t, m, amb @ t.section)


@lru_cache(maxsize=None)
def left_unitor_inv(m: Bimodule) -> BimoduleMap:
    t = tensor_over(unit_bimodule(m.left), m)
    amb = m.left.unit_vector.kron(Matrix.identity(m.field, m.dim))
    return BimoduleMap(m, t, t.projection @ amb)


@lru_cache(maxsize=None)
def right_unitor(m: Bimodule) -> BimoduleMap:
    """``m (x)_B B -> m``, the right action."""
    t = tensor_over(m, unit_bimodule(m.right))
    f = m.field
    db = m.right.dim
    amb = f.zeros((m.dim, m.dim * db))
    for i, r in enumerate(m.right_action):
        for j in range(m.dim):
            amb[:, j * db + i] = r.a[:, j]
    return BimoduleMap(t, m, Matrix(f, amb) @ t.section)


@lru_cache(maxsize=None)
def right_unitor_inv(m: Bimodule) -> BimoduleMap:
    t = tensor_over(m, unit_bimodule(m.right))
    amb = Matrix.identity(m.field, m.dim).kron(m.right.unit_vector)
    return BimoduleMap(m, t, t.projection @ amb)


def iota(m: Bimodule) -> BimoduleMap:
    """``A (x) m -> m (x) B``: the right unitor inverse after the left unitor."""
    return right_unitor_inv(m) @ left_unitor(m)


def iota_inv(m: Bimodule) -> BimoduleMap:
    return left_unitor_inv(m) @ right_unitor(m)


# ----------------------------------------------------------------------------
# rebracketing


def leaves(m: Bimodule) -> tuple:
    if isinstance(m, TensorBimodule):
        return leaves(m.factors[0]) + leaves(m.factors[1])
    return (m,)


@lru_cache(maxsize=None)
def _normalize(t: Bimodule):
    """Right-nested normal form of a tensor tree and the canonical map onto it."""
    if not isinstance(t, TensorBimodule):
        return t, identity(t)
    x, y = t.factors
    nx, fx = _normalize(x)
    ny, fy = _normalize(y)
    step = induced_map(fx, fy, src=t, check=False)
    return _push(tensor_over(nx, ny), step)


def _push(cur: TensorBimodule, step: BimoduleMap):
    x, y = cur.factors
    if not isinstance(x, TensorBimodule):
        return cur, step
    a, r = x.factors
    alpha = associator(a, r, y)
    inner_t = tensor_over(r, y)
    inner, g = _push(inner_t, identity(inner_t))
    tail = induced_map(identity(a), g, check=False)
    return tensor_over(a, inner), tail @ alpha @ step


@lru_cache(maxsize=None)
def rebracket(src: Bimodule, tgt: Bimodule) -> BimoduleMap:
    """Canonical isomorphism between two bracketings of one tensor word."""
    if src == tgt:
        return identity(src)
    ns, fs = _normalize(src)
    nt, ft = _normalize(tgt)
    if ns != nt:
        raise AlgebraMismatch(f"{src.label} and {tgt.label} are not rebracketings of each other")
    return ft.inverse() @ fs


# ----------------------------------------------------------------------------
# hom spaces, restriction, sums


def hom_constraints(m: Bimodule, n: Bimodule) -> Matrix:
    """Rows whose kernel is the row-major vectorisation of bilinear maps ``m -> n``."""
    f = m.field
    im, in_ = Matrix.identity(f, m.dim), Matrix.identity(f, n.dim)
    rows = []
    for x, y in zip(m.left_action, n.left_action):
        rows.append(in_.kron(x.T) - y.kron(im))
    for x, y in zip(m.right_action, n.right_action):
        rows.append(in_.kron(x.T) - y.kron(im))
    return vstack(rows)


def hom_basis(m: Bimodule, n: Bimodule) -> list[BimoduleMap]:
    """A basis of the space of bimodule maps ``m -> n``."""
    if m.left != n.left or m.right != n.right:
        raise AlgebraMismatch("hom between bimodules over different algebras")
    if m.dim == 0 or n.dim == 0:
        return []
    kb = kernel_basis(hom_constraints(m, n))
    out = []
    for k in range(kb.cols):
        mat = np.array(kb.a[:, k], dtype=kb.a.dtype).reshape(n.dim, m.dim)
        out.append(BimoduleMap(m, n, Matrix(m.field, mat)))
    return out


def combine_maps(coeffs, maps: list[BimoduleMap], src: Bimodule, tgt: Bimodule) -> BimoduleMap:
    out = zero_map(src, tgt)
    for c, g in zip(coeffs, maps):
        out = out + g.scale(c)
    return out


def restrict(m: Bimodule, left=None, right=None, name=None) -> Bimodule:
    """Restriction of scalars along algebra maps ``left: A' -> A``, ``right: B' -> B``.

    Each is a pair ``(algebra, matrix)`` with the matrix of shape
    ``A.dim x A'.dim``; ``None`` keeps the side unchanged.
    """
    la, ra = m.left, m.right
    lacts, racts = m.left_action, m.right_action
    if left is not None:
        la, phi = left
        lacts = [m.left_matrix(phi.a[:, i]) for i in range(la.dim)]
    if right is not None:
        ra, phi = right
        racts = [m.right_matrix(phi.a[:, i]) for i in range(ra.dim)]
    return Bimodule(la, ra, lacts, racts, name or m.label)


def direct_sum(m: Bimodule, n: Bimodule, name=None) -> Bimodule:
    if m.left != n.left or m.right != n.right:
        raise AlgebraMismatch("direct sum over different algebras")
    left = [block_diag([x, y]) for x, y in zip(m.left_action, n.left_action)]
    right = [block_diag([x, y]) for x, y in zip(m.right_action, n.right_action)]
    return Bimodule(m.left, m.right, left, right, name or f"({m.label}+{n.label})")


def sum_injections(m: Bimodule, n: Bimodule, s: Bimodule):
    f = m.field
    i1 = vstack([Matrix.identity(f, m.dim), Matrix.zeros(f, n.dim, m.dim)])
    i2 = vstack([Matrix.zeros(f, m.dim, n.dim), Matrix.identity(f, n.dim)])
    return BimoduleMap(m, s, i1), BimoduleMap(n, s, i2)


def sum_projections(m: Bimodule, n: Bimodule, s: Bimodule):
    i1, i2 = sum_injections(m, n, s)
    return (
        BimoduleMap(s, m, i1.matrix.T),
        BimoduleMap(s, n, i2.matrix.T),
    )


def conjugate(m: Bimodule, p: Matrix, name=None) -> Bimodule:
    """Change of basis ``x -> p x`` applied to both actions."""
    pinv = p.inverse()
    return Bimodule(
        m.left,
        m.right,
        [p @ x @ pinv for x in m.left_action],
        [p @ x @ pinv for x in m.right_action],
        name or m.label,
    )


def regular_bimodule(alg: Algebra, name=None) -> Bimodule:
    """The algebra as a plain (non-unit-tagged) bimodule over itself."""
    return Bimodule(alg, alg, alg.left_matrices, alg.right_matrices, name or alg.name)
