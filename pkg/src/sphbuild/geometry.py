"""Exact rational geometry on the realization sphere of a Coxeter complex.

Points of the sphere are rays: any nonzero vector stands for the ray it
spans, and nothing is ever normalized.  Coordinates are taken in the basis
of fundamental weights, with inner products evaluated through the Gram form
of that basis.  Every predicate here is decided with integer or
:class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Vector = tuple  # tuple of int / Fraction
Matrix = tuple  # tuple of row tuples


# --------------------------------------------------------------------------
# plain linear algebra over Q


def qvec(v: Iterable) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    return tuple(sum(a * b for a, b in zip(row, v)) for row in m)


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple:
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in cols) for row in a)


def transpose(m: Sequence[Sequence]) -> tuple:
    return tuple(zip(*m))


def identity(n: int) -> tuple:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def rref(rows: Iterable[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = [[Fraction(x) for x in r] for r in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Iterable[Sequence]) -> int:
    return len(rref(rows)[1])


def det(m: Sequence[Sequence]) -> Fraction:
    a = [[Fraction(x) for x in r] for r in m]
    n = len(a)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if a[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            a[c], a[p] = a[p], a[c]
            d = -d
        d *= a[c][c]
        for i in range(c + 1, n):
            if a[i][c] != 0:
                f = a[i][c] / a[c][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return d


def inverse(m: Sequence[Sequence]) -> tuple:
    n = len(m)
    aug = [list(map(Fraction, row)) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(m)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return tuple(tuple(r[n:]) for r in red)


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[tuple[Fraction, ...]]:
    """Basis of {x : rows @ x = 0}."""
    red, piv = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        x = [Fraction(0)] * ncols
        x[f] = Fraction(1)
        for r, p in zip(red, piv):
            x[p] = -r[f]
        basis.append(tuple(x))
    return basis


def solve_in_span(basis: Sequence[Sequence], x: Sequence) -> tuple[Fraction, ...] | None:
    """Coefficients c with sum c_i basis_i == x, or None if x is not in the span."""
    k = len(basis)
    if k == 0:
        return () if all(v == 0 for v in x) else None
    aug = [[basis[i][r] for i in range(k)] + [x[r]] for r in range(len(x))]
    red, piv = rref(aug)
    if k in piv:
        return None
    coef = [Fraction(0)] * k
    for r, p in zip(red, piv):
        coef[p] = r[k]
    return tuple(coef)


def fmt(x) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def dump_matrix(m: Sequence[Sequence]) -> list[list[str]]:
    """Matrix as nested lists of rational strings "p/q" (debug/JSON form)."""
    return [[fmt(x) for x in row] for row in m]


# --------------------------------------------------------------------------
# Gram forms and subspaces


@dataclass(frozen=True)
class GramForm:
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        m = self.matrix
        n = len(m)
        if any(m[i][j] != m[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram form is not symmetric")
        if any(det([r[:k] for r in m[:k]]) <= 0 for k in range(1, n + 1)):
            raise ValueError("Gram form is not positive definite")

    @property
    def dim(self) -> int:
        return len(self.matrix)

    def inner(self, u: Sequence, v: Sequence):
        return dot(u, mat_vec(self.matrix, v))

    def is_isometry(self, r: Sequence[Sequence]) -> bool:
        return mat_mul(mat_mul(transpose(r), self.matrix), r) == self.matrix


@dataclass(frozen=True)
class QSubspace:
    """A linear subspace of Q^n, stored by its canonical (RREF) basis."""

    ambient: int
    basis: tuple[tuple[Fraction, ...], ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: Sequence) -> bool:
        if all(v == 0 for v in x):
            return True
        return solve_in_span(self.basis, x) is not None

    def contains_all(self, xs: Iterable[Sequence]) -> bool:
        return all(self.contains(x) for x in xs)

    def image(self, m: Sequence[Sequence]) -> "QSubspace":
        return span([mat_vec(m, b) for b in self.basis], self.ambient)

    def to_json(self) -> list[list[str]]:
        return dump_matrix(self.basis)


def span(vectors: Iterable[Sequence], ambient: int | None = None) -> QSubspace:
    vs = [qvec(v) for v in vectors]
    if ambient is None:
        if not vs:
            raise ValueError("ambient dimension needed for the span of nothing")
        ambient = len(vs[0])
    red, _ = rref(vs)
    return QSubspace(ambient, tuple(tuple(r) for r in red))


def whole_space(n: int) -> QSubspace:
    return span(identity(n), n)


def intersect(u: QSubspace, v: QSubspace) -> QSubspace:
    n = u.ambient
    if u.dim == 0 or v.dim == 0:
        return QSubspace(n, ())
    ann_v = nullspace(v.basis, n)  # Euclidean annihilator of v
    if not ann_v:
        return u
    # x = sum a_i u_i lies in v iff ann_v @ x == 0
    cons = [[dot(f, ub) for ub in u.basis] for f in ann_v]
    coeffs = nullspace(cons, u.dim)
    return span([tuple(sum(c * ub[k] for c, ub in zip(a, u.basis)) for k in range(n)) for a in coeffs], n)


def orthogonal_complement(u: QSubspace, within: QSubspace, gram: GramForm) -> QSubspace:
    """{x in within : <x, u> = 0} for the Gram form."""
    n = within.ambient
    if u.dim == 0:
        return within
    cons = [[gram.inner(ub, vb) for vb in within.basis] for ub in u.basis]
    coeffs = nullspace(cons, within.dim)
    return span([tuple(sum(c * vb[k] for c, vb in zip(a, within.basis)) for k in range(n)) for a in coeffs], n)


def reflection_matrix(normal: Sequence, gram: GramForm) -> tuple:
    """Gram-orthogonal reflection x -> x - 2<n,x>/<n,n> n as an ambient matrix."""
    n = qvec(normal)
    gn = mat_vec(gram.matrix, n)
    nn = dot(n, gn)
    if nn == 0:
        raise ValueError("zero normal")
    dim = len(n)
    return tuple(
        tuple(Fraction(int(i == j)) - 2 * n[i] * gn[j] / nn for j in range(dim)) for i in range(dim)
    )


def reflect_along(h: QSubspace, within: QSubspace, gram: GramForm) -> tuple:
    """The reflection of `within` fixing the hyperplane `h` pointwise."""
    if not all(within.contains(b) for b in h.basis) or h.dim != within.dim - 1:
        raise ValueError("reflect_along needs a codimension-1 subspace of the given space")
    normal = orthogonal_complement(h, within, gram)
    return reflection_matrix(normal.basis[0], gram)


def antipodal(u: Sequence, v: Sequence) -> bool:
    """True iff v is a negative multiple of u."""
    if all(x == 0 for x in u) or all(x == 0 for x in v):
        raise ValueError("zero vector has no ray")
    k = next(i for i, x in enumerate(u) if x != 0)
    lam = Fraction(v[k]) / Fraction(u[k])
    if lam >= 0:
        return False
    return all(Fraction(b) == lam * a for a, b in zip(u, v))


# --------------------------------------------------------------------------
# exact linear feasibility


def lp_feasible(a_eq: Sequence[Sequence], b_eq: Sequence) -> tuple[Fraction, ...] | None:
    """Find x >= 0 with a_eq @ x == b_eq, exactly, or return None.

    Phase-one simplex over the rationals with Bland's rule, so it always
    terminates.
    """
    m = len(a_eq)
    if m == 0:
        return ()
    n = len(a_eq[0])
    tab: list[list[Fraction]] = []
    for i in range(m):
        row = [Fraction(x) for x in a_eq[i]]
        rhs = Fraction(b_eq[i])
        if rhs < 0:
            row = [-x for x in row]
            rhs = -rhs
        tab.append(row + [Fraction(int(i == k)) for k in range(m)] + [rhs])
    width = n + m
    basis = [n + i for i in range(m)]
    cost = [-sum(tab[i][j] for i in range(m)) for j in range(n)] + [Fraction(0)] * m
    while True:
        enter = next((j for j in range(width) if cost[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = tab[i][enter]
            if a > 0:
                ratio = tab[i][-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:  # cannot happen in phase one
            break
        r = best[1]
        piv = tab[r][enter]
        if piv != 1:
            tab[r] = [x / piv for x in tab[r]]
        prow = tab[r]
        for i in range(m):
            f = tab[i][enter]
            if i != r and f != 0:
                tab[i] = [x - f * y for x, y in zip(tab[i], prow)]
        f = cost[enter]
        cost = [x - f * y for x, y in zip(cost, prow[:width])]
        basis[r] = enter
    if any(bv >= n and tab[i][-1] != 0 for i, bv in enumerate(basis)):
        return None
    x = [Fraction(0)] * n
    for i, bv in enumerate(basis):
        if bv < n:
            x[bv] = tab[i][-1]
    return tuple(x)


class Side(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


@dataclass(frozen=True)
class ConvexCone:
    generators: tuple[tuple, ...]


def cone_side(cone: ConvexCone | Sequence[Sequence], x: Sequence) -> Side:
    """Position of the ray of x relative to a finitely generated cone.

    INTERIOR means the relative interior, i.e. x is a combination of the
    generators with every coefficient strictly positive.
    """
    gens = cone.generators if isinstance(cone, ConvexCone) else tuple(cone)
    if all(v == 0 for v in x):
        raise ValueError("zero vector has no ray")
    if not gens:
        return Side.OUTSIDE
    dim = len(x)
    k = len(gens)
    a = [[g[r] for g in gens] for r in range(dim)]
    if lp_feasible(a, x) is None:
        return Side.OUTSIDE
    # t*x = sum l_g g with t >= 1, l_g >= 1; shift to nonnegative variables
    a2 = [[g[r] for g in gens] + [-x[r]] for r in range(dim)]
    b2 = [x[r] - sum(g[r] for g in gens) for r in range(dim)]
    return Side.INTERIOR if lp_feasible(a2, b2) is not None else Side.BOUNDARY


def relint_meets_cone(cell_gens: Sequence[Sequence], cone_gens: Sequence[Sequence]) -> tuple | None:
    """A point in relint(cone(cell_gens)) ∩ cone(cone_gens), or None.

    `cell_gens` must be linearly independent (a simplicial cone).
    """
    dim = len(cell_gens[0])
    k = len(cone_gens)
    p = len(cell_gens)
    # sum l_u u - sum mu_v v = 0, l >= 0, mu_v >= 1 (shifted: mu = 1 + nu)
    a = [[u[r] for u in cone_gens] + [-v[r] for v in cell_gens] for r in range(dim)]
    b = [sum(v[r] for v in cell_gens) for r in range(dim)]
    sol = lp_feasible(a, b)
    if sol is None:
        return None
    lam = sol[:k]
    return tuple(sum(l * u[r] for l, u in zip(lam, cone_gens)) for r in range(dim))


# --------------------------------------------------------------------------
# realization of a crystallographic Coxeter system


@dataclass(frozen=True)
class Realization:
    """Weight-basis realization: Gram form, simple reflections, fundamental rays."""

    system: object  # CoxeterSystem; untyped to avoid an import cycle
    gram: GramForm
    reflections: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def rank(self) -> int:
        return self.gram.dim

    def weight(self, i: int) -> tuple[int, ...]:
        return tuple(int(j == i) for j in range(self.rank))

    def matrix(self, g: int) -> tuple:
        return self.system.action(g)


def symmetrizer(cartan: Sequence[Sequence[int]]) -> list[Fraction]:
    """d_i > 0 with d_j C[i][j] == d_i C[j][i] (Coxeter graph must be a forest)."""
    n = len(cartan)
    d: list[Fraction | None] = [None] * n
    for root in range(n):
        if d[root] is not None:
            continue
        d[root] = Fraction(1)
        stack = [root]
        while stack:
            i = stack.pop()
            for j in range(n):
                if j != i and cartan[i][j] != 0 and d[j] is None:
                    d[j] = d[i] * cartan[j][i] / cartan[i][j]
                    stack.append(j)
    return d  # type: ignore[return-value]


def realize(system) -> Realization:
    c = system.cartan
    d = symmetrizer(c)
    cinv = inverse(c)
    g = tuple(tuple(cinv[i][j] * d[j] for j in range(len(c))) for i in range(len(c)))
    return Realization(system, GramForm(g), tuple(system.action(system.generator(i)) for i in range(system.rank)))


def act(realization: Realization, g: int, x: Sequence) -> tuple:
    return mat_vec(realization.matrix(g), x)
