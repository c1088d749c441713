"""Finite crystallographic Coxeter systems with a fully enumerated element table.

Elements are plain integer indices into the table.  Index 0 is the identity
and indices follow shortlex order of the canonical reduced words, so the
numbering is a deterministic function of the Coxeter matrix.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .geometry import det

ALLOWED = (2, 3, 4, 6)
MAX_ORDER = 20000


class CoxeterMatrixError(ValueError):
    pass


@dataclass(frozen=True)
class CoxeterMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        m = self.entries
        n = len(m)
        if n == 0:
            raise CoxeterMatrixError("rank must be positive")
        for i in range(n):
            if len(m[i]) != n:
                raise CoxeterMatrixError(f"row {i} has length {len(m[i])}, expected {n}")
            if m[i][i] != 1:
                raise CoxeterMatrixError(f"entry ({i},{i}) = {m[i][i]}, diagonal must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise CoxeterMatrixError(f"entry ({i},{j}) = {m[i][j]} differs from ({j},{i}) = {m[j][i]}")
                if i != j and m[i][j] not in ALLOWED:
                    raise CoxeterMatrixError(
                        f"entry ({i},{j}) = {m[i][j]} is not in {ALLOWED} (non-crystallographic or infinite)"
                    )

    @classmethod
    def of(cls, rows: Iterable[Iterable[int]]) -> "CoxeterMatrix":
        return cls(tuple(tuple(int(x) for x in r) for r in rows))

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.entries]


def block_sum(*mats: CoxeterMatrix) -> CoxeterMatrix:
    n = sum(m.rank for m in mats)
    out = [[2] * n for _ in range(n)]
    off = 0
    for m in mats:
        for i in range(m.rank):
            for j in range(m.rank):
                out[off + i][off + j] = m[i, j]
        off += m.rank
    for i in range(n):
        out[i][i] = 1
    return CoxeterMatrix.of(out)


def _chain(n: int, last: int = 3) -> list[list[int]]:
    m = [[2] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = 1
    for i in range(n - 1):
        m[i][i + 1] = m[i + 1][i] = 3
    if n >= 2:
        m[n - 2][n - 1] = m[n - 1][n - 2] = last
    return m


def named_matrix(name: str) -> CoxeterMatrix:
    """Coxeter matrix from a type name such as "A2", "B3", "G2" or "A2xA1"."""
    parts = [p.strip() for p in name.split("x")]
    if len(parts) > 1:
        return block_sum(*(named_matrix(p) for p in parts))
    mt = re.fullmatch(r"([A-Ga-g])(\d+)", name.strip())
    if not mt:
        raise CoxeterMatrixError(f"unknown Coxeter type {name!r}")
    kind, n = mt.group(1).upper(), int(mt.group(2))
    if n < 1:
        raise CoxeterMatrixError(f"bad rank in {name!r}")
    if kind == "A":
        return CoxeterMatrix.of(_chain(n))
    if kind in "BC" and n >= 2:
        return CoxeterMatrix.of(_chain(n, 4))
    if kind == "D" and n >= 4:
        m = _chain(n)
        m[n - 2][n - 1] = m[n - 1][n - 2] = 2
        m[n - 3][n - 1] = m[n - 1][n - 3] = 3
        return CoxeterMatrix.of(m)
    if kind == "G" and n == 2:
        return CoxeterMatrix.of([[1, 6], [6, 1]])
    if kind == "F" and n == 4:
        m = _chain(4)
        m[1][2] = m[2][1] = 4
        return CoxeterMatrix.of(m)
    raise CoxeterMatrixError(f"unsupported Coxeter type {name!r}")


def cartan_matrix(matrix: CoxeterMatrix) -> tuple[tuple[int, ...], ...]:
    """Integer Cartan matrix with C[i][j] * C[j][i] = 4 cos^2(pi/m_ij).

    Rejects Coxeter graphs with cycles and forms that are not positive
    definite, i.e. infinite groups.
    """
    n = matrix.rank
    c = [[0] * n for _ in range(n)]
    prod = {2: 0, 3: 1, 4: 2, 6: 3}
    for i in range(n):
        c[i][i] = 2
        for j in range(i + 1, n):
            p = prod[matrix[i, j]]
            if p:
                c[i][j] = -1
                c[j][i] = -p
    # a finite Coxeter graph is a forest
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if matrix[i, j] > 2:
                ri, rj = find(i), find(j)
                if ri == rj:
                    raise CoxeterMatrixError(f"Coxeter graph has a cycle through entry ({i},{j}); group is infinite")
                parent[ri] = rj
    for k in range(1, n + 1):
        if det([row[:k] for row in c[:k]]) <= 0:
            raise CoxeterMatrixError(
                f"bilinear form is not positive definite (leading minor {k}); group is infinite"
            )
    return tuple(tuple(r) for r in c)


@dataclass(eq=False)
class CoxeterSystem:
    """A finite Coxeter system with every element, length and product tabulated."""

    matrix: CoxeterMatrix
    cartan: tuple[tuple[int, ...], ...]
    words: list[tuple[int, ...]]
    matrices: np.ndarray  # (|W|, n, n) action on weight coordinates
    mul: np.ndarray  # (|W|, |W|)
    lengths: np.ndarray
    inv: np.ndarray
    _index: dict = field(default_factory=dict, repr=False)

    @property
    def rank(self) -> int:
        return self.matrix.rank

    @property
    def order(self) -> int:
        return len(self.words)

    @property
    def identity(self) -> int:
        return 0

    def generator(self, i: int) -> int:
        return self._index[(i,)]

    def length(self, w: int) -> int:
        return int(self.lengths[w])

    def word(self, w: int) -> tuple[int, ...]:
        return self.words[w]

    def product(self, *ws: int) -> int:
        r = 0
        for w in ws:
            r = int(self.mul[r, w])
        return r

    def inverse(self, w: int) -> int:
        return int(self.inv[w])

    def from_word(self, word: Sequence[int]) -> int:
        w = 0
        for s in word:
            w = int(self.mul[w, self.generator(s)])
        return w

    def action(self, w: int) -> tuple:
        """Integer matrix of w acting on weight coordinates."""
        return tuple(tuple(int(x) for x in row) for row in self.matrices[w])

    def right_descent(self, w: int) -> set[int]:
        return {s for s in range(self.rank) if self.lengths[self.mul[w, self.generator(s)]] < self.lengths[w]}

    def in_parabolic(self, w: int, types: Iterable[int]) -> bool:
        t = set(types)
        return all(s in t for s in self.words[w])

    def __repr__(self) -> str:
        return f"CoxeterSystem(rank={self.rank}, order={self.order})"


def _encode(points: np.ndarray) -> np.ndarray:
    lo = points.min()
    span_ = int(points.max() - lo) + 1
    codes = np.zeros(points.shape[0], dtype=np.int64)
    for k in range(points.shape[1]):
        codes = codes * span_ + (points[:, k] - lo)
    return codes


def build_system(matrix: CoxeterMatrix) -> CoxeterSystem:
    """Enumerate the group by breadth-first search on the orbit of rho.

    Right multiplication by generators in increasing order, level by level,
    visits elements in shortlex order of their least reduced words.
    """
    cartan = cartan_matrix(matrix)
    n = matrix.rank
    c = np.array(cartan, dtype=np.int64)
    gens = []
    for i in range(n):
        r = np.eye(n, dtype=np.int64)
        r[:, i] -= c[i]
        gens.append(r)
    rho = np.ones(n, dtype=np.int64)
    mats = [np.eye(n, dtype=np.int64)]
    words: list[tuple[int, ...]] = [()]
    seen = {tuple(rho)}
    head = 0
    while head < len(mats):
        m, wd = mats[head], words[head]
        head += 1
        for s in range(n):
            nm = m @ gens[s]
            key = tuple(nm @ rho)
            if key not in seen:
                seen.add(key)
                mats.append(nm)
                words.append(wd + (s,))
                if len(mats) > MAX_ORDER:
                    raise CoxeterMatrixError("group order exceeds the supported bound")
    order = len(mats)
    matrices = np.stack(mats)
    points = matrices @ rho  # (|W|, n)
    codes = _encode(points)
    sorter = np.argsort(codes)
    sorted_codes = codes[sorter]

    def lookup(pts: np.ndarray) -> np.ndarray:
        lo = points.min()
        span_ = int(points.max() - lo) + 1
        cc = np.zeros(pts.shape[0], dtype=np.int64)
        for k in range(n):
            cc = cc * span_ + (pts[:, k] - lo)
        pos = np.searchsorted(sorted_codes, cc)
        return sorter[pos]

    mul = np.empty((order, order), dtype=np.int32)
    for u in range(order):
        mul[u] = lookup(points @ matrices[u].T)
    lengths = np.array([len(w) for w in words], dtype=np.int32)
    inv = np.argmax(mul == 0, axis=1).astype(np.int32)
    index = {w: i for i, w in enumerate(words)}
    return CoxeterSystem(matrix, cartan, words, matrices, mul, lengths, inv, index)


@lru_cache(maxsize=None)
def system_for(matrix: CoxeterMatrix) -> CoxeterSystem:
    return build_system(matrix)


def named_system(name: str) -> CoxeterSystem:
    return system_for(named_matrix(name))


def longest_element(sys: CoxeterSystem) -> int:
    return int(np.argmax(sys.lengths))


def opposition_type_map(sys: CoxeterSystem, types: Iterable[int]) -> frozenset[int]:
    """J -> w0 J w0 as a set of generator indices."""
    w0 = longest_element(sys)
    out = set()
    for s in types:
        c = sys.product(w0, sys.generator(s), w0)
        out.add(sys.words[c][0])
    return frozenset(out)


def minimal_coset_rep(sys: CoxeterSystem, w: int, types: Iterable[int]) -> int:
    """The unique shortest element of the coset w W_J."""
    j = [sys.generator(s) for s in types]
    changed = True
    while changed:
        changed = False
        for g in j:
            ws = int(sys.mul[w, g])
            if sys.lengths[ws] < sys.lengths[w]:
                w = ws
                changed = True
    return w


def parabolic_elements(sys: CoxeterSystem, types: Iterable[int]) -> list[int]:
    t = set(types)
    return [w for w in range(sys.order) if all(s in t for s in sys.words[w])]
