"""Independent reference computations used to cross-check the package.

Nothing here imports the package's linear algebra: ranks come from plain
Python elimination over Fraction / integers mod p, or from sympy, and
determinants from cofactor expansion.
"""

from fractions import Fraction
from itertools import combinations

import sympy


def _entries(m):
    return [list(row) for row in m.a.tolist()]


def rank_plain(rows, p=None):
    """Gaussian elimination on lists; ``p`` selects arithmetic mod p."""
    if p is None:
        a = [[Fraction(x) for x in r] for r in rows]
    else:
        a = [[int(x) % p for x in r] for r in rows]
    if not a:
        return 0
    nr, nc = len(a), len(a[0])
    r = 0
    for c in range(nc):
        piv = next((i for i in range(r, nr) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = (1 / a[r][c]) if p is None else pow(a[r][c], p - 2, p)
        for i in range(nr):
            if i != r and a[i][c] != 0:
                fac = a[i][c] * inv
                a[i] = [(x - fac * y) if p is None else (x - fac * y) % p for x, y in zip(a[i], a[r])]
        r += 1
        if r == nr:
            break
    return r


def det_cofactor(rows, p=None):
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0] if p is None else rows[0][0] % p
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [r[:j] + r[j + 1 :] for r in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor, p)
    return total if p is None else total % p


def rank_by_minors(rows, p=None, max_k=4):
    """Largest k <= max_k with a nonzero k x k minor."""
    nr, nc = len(rows), len(rows[0]) if rows else 0
    best = 0
    for k in range(1, min(nr, nc, max_k) + 1):
        found = False
        for ri in combinations(range(nr), k):
            for ci in combinations(range(nc), k):
                sub = [[rows[i][j] for j in ci] for i in ri]
                if det_cofactor(sub, p) != 0:
                    found = True
                    break
            if found:
                break
        if not found:
            break
        best = k
    return best


def rank_of(m):
    p = getattr(m.field, "p", None)
    return rank_plain(_entries(m), p)


def sympy_rank(m):
    return sympy.Matrix(_entries(m)).rank()


def tensor_dim_oracle(m, n):
    """``dim M (x)_B N`` as ``dim M * dim N - rank`` of the relation span, built from scratch."""
    p = getattr(m.field, "p", None)
    dm, dn = m.dim, n.dim
    rels = []
    for rb, lb in zip(m.right_action, n.left_action):
        R, L = _entries(rb), _entries(lb)
        for i in range(dm):
            for j in range(dn):
                # (e_i b) (x) e_j - e_i (x) (b e_j)
                v = [0] * (dm * dn)
                for k in range(dm):
                    v[k * dn + j] += R[k][i]
                for k in range(dn):
                    v[i * dn + k] -= L[k][j]
                rels.append(v)
    return dm * dn - rank_plain(rels, p)


def hom_dim_oracle(m, n):
    """Dimension of bimodule maps ``m -> n`` from the commuting conditions, via sympy over Q."""
    dm, dn = m.dim, n.dim
    xs = sympy.symbols(f"x0:{dm * dn}")
    X = sympy.Matrix(dn, dm, xs)
    eqs = []
    for la, lb in zip(m.left_action, n.left_action):
        eqs += list(X * sympy.Matrix(_entries(la)) - sympy.Matrix(_entries(lb)) * X)
    for ra, rb in zip(m.right_action, n.right_action):
        eqs += list(X * sympy.Matrix(_entries(ra)) - sympy.Matrix(_entries(rb)) * X)
    if not eqs:
        return dm * dn
    a, _ = sympy.linear_eq_to_matrix(eqs, xs)
    return dm * dn - a.rank()
