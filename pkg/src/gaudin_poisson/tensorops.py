"""Exact dense linear algebra on tensor powers V^{(x)N}.

Basis convention (shared by every module): the basis of V^{(x)N} is ordered
lexicographically by the multi-index (i_1, ..., i_N), leg 1 most significant,
so the flat index is ``((i_1 * n + i_2) * n + ...) * n + i_N``.  Indices are
0-based internally.  ``op[row][col]`` is the coefficient of basis vector
``row`` in ``op(e_col)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Hashable, Iterable, List, Optional, Sequence, Tuple

Matrix = Tuple[Tuple[Fraction, ...], ...]

ZERO = Fraction(0)
ONE = Fraction(1)


class SingularSystem(ValueError):
    pass


class InconsistentSystem(ValueError):
    pass


# --------------------------------------------------------------------------
# plain exact matrices (tuples of tuples of Fraction)
# --------------------------------------------------------------------------

def mat(rows) -> Matrix:
    return tuple(tuple(Fraction(x) for x in row) for row in rows)


def zeros(n: int, m: Optional[int] = None) -> Matrix:
    m = n if m is None else m
    return tuple((ZERO,) * m for _ in range(n))


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise ValueError(f"shape mismatch {len(a)}x{len(a[0])} @ {len(b)}x?")
    m = len(b[0]) if b else 0
    b_nz = [[(j, x) for j, x in enumerate(row) if x] for row in b]
    out = []
    for row in a:
        acc = [ZERO] * m
        for k, x in enumerate(row):
            if x:
                for j, y in b_nz[k]:
                    acc[j] += x * y
        out.append(tuple(acc))
    return tuple(out)


def matadd(a: Matrix, b: Matrix, sb=ONE) -> Matrix:
    return tuple(tuple(x + sb * y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def matscale(a: Matrix, s) -> Matrix:
    s = Fraction(s)
    return tuple(tuple(s * x for x in row) for row in a)


def transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else ()


def trace(a: Matrix) -> Fraction:
    return sum((a[i][i] for i in range(len(a))), ZERO)


def kron(a: Matrix, b: Matrix) -> Matrix:
    nb, mb = len(b), len(b[0])
    out = []
    for ra in a:
        for i in range(nb):
            out.append(tuple(x * y for x in ra for y in b[i]))
    return tuple(out)


def is_zero(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def first_difference(a: Matrix, b: Matrix) -> Optional[Tuple[int, int]]:
    for i, (ra, rb) in enumerate(zip(a, b)):
        for j, (x, y) in enumerate(zip(ra, rb)):
            if x != y:
                return i, j
    return None


def rref(rows: Sequence[Sequence[Fraction]]) -> Tuple[List[List[Fraction]], List[int]]:
    """Reduced row echelon form of a dense matrix; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        piv = m[r]
        nz = [j for j in range(c, ncols) if piv[j]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                row = m[i]
                for j in nz:
                    row[j] -= f * piv[j]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rank(a: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(a)[1])


def solve(a: Matrix, b: Sequence[Sequence[Fraction]]) -> Matrix:
    """Solve ``a @ x = b`` exactly for square nonsingular ``a`` (b: matrix of rhs columns)."""
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("solve needs a square matrix")
    width = len(b[0]) if b else 0
    aug = [list(a[i]) + list(b[i]) for i in range(n)]
    red, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularSystem(f"matrix of size {n} has rank {sum(1 for p in piv if p < n)}")
    return tuple(tuple(red[i][n:n + width]) for i in range(n))


def solve_overdetermined(a: Sequence[Sequence[Fraction]], b: Sequence[Fraction]) -> Tuple[Fraction, ...]:
    """Unique exact solution of ``a x = b`` with ``a`` of full column rank."""
    ncols = len(a[0])
    aug = [list(r) + [Fraction(y)] for r, y in zip(a, b)]
    red, piv = rref(aug)
    if ncols in piv:
        raise InconsistentSystem("linear system has no solution")
    if len(piv) < ncols:
        raise SingularSystem(f"solution not unique: rank {len(piv)} < {ncols} unknowns")
    return tuple(red[i][ncols] for i in range(ncols))


def inverse(a: Matrix) -> Matrix:
    return solve(a, identity(len(a)))


# --------------------------------------------------------------------------
# sparse row space: exact RREF maintained incrementally, gives normal forms
# --------------------------------------------------------------------------

SparseVec = Dict[Hashable, Fraction]


class RowSpace:
    """An exact subspace of a (sparse, possibly huge) coordinate space.

    Rows are kept fully reduced, so :meth:`reduce` is the linear projector
    onto the complement spanned by non-pivot coordinates; two vectors are
    congruent modulo the space iff their reductions agree.
    """

    def __init__(self, vectors: Iterable[SparseVec] = (), key: Callable = None):
        self._rows: Dict[Hashable, SparseVec] = {}
        self._key = key
        for v in vectors:
            self.add(v)

    def __len__(self):
        return len(self._rows)

    @property
    def rank(self) -> int:
        return len(self._rows)

    def reduce(self, vec: SparseVec) -> SparseVec:
        out = {k: Fraction(x) for k, x in vec.items() if x}
        for p in [p for p in out if p in self._rows]:
            f = out.get(p)
            if not f:
                continue
            for k, x in self._rows[p].items():
                y = out.get(k, ZERO) - f * x
                if y:
                    out[k] = y
                else:
                    out.pop(k, None)
        return out

    def add(self, vec: SparseVec) -> bool:
        """Add a vector; return True when it enlarged the space."""
        v = self.reduce(vec)
        if not v:
            return False
        p = min(v, key=self._key) if self._key else min(v)
        inv = 1 / v[p]
        v = {k: x * inv for k, x in v.items()}
        for q, row in self._rows.items():
            f = row.get(p)
            if f:
                for k, x in v.items():
                    y = row.get(k, ZERO) - f * x
                    if y:
                        row[k] = y
                    else:
                        row.pop(k, None)
        self._rows[p] = v
        return True

    def contains(self, vec: SparseVec) -> bool:
        return not self.reduce(vec)

    def basis(self) -> List[SparseVec]:
        return [dict(r) for r in self._rows.values()]

    def same_span(self, other: "RowSpace") -> bool:
        return (self.rank == other.rank
                and all(other.contains(v) for v in self._rows.values()))


# --------------------------------------------------------------------------
# operators on tensor legs
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class LegOperator:
    """Exact operator on V^{(x)legs}, dim V = ``dim``."""

    dim: int
    legs: int
    entries: Matrix

    def __post_init__(self):
        size = self.dim ** self.legs
        if len(self.entries) != size or any(len(r) != size for r in self.entries):
            raise ValueError(f"LegOperator(dim={self.dim}, legs={self.legs}) "
                             f"needs a {size}x{size} matrix")

    @classmethod
    def from_rows(cls, dim, legs, rows) -> "LegOperator":
        return cls(dim, legs, mat(rows))

    @classmethod
    def identity(cls, dim: int, legs: int = 1) -> "LegOperator":
        return cls(dim, legs, identity(dim ** legs))

    @property
    def size(self) -> int:
        return self.dim ** self.legs

    def __matmul__(self, other: "LegOperator") -> "LegOperator":
        self._compat(other)
        return LegOperator(self.dim, self.legs, matmul(self.entries, other.entries))

    def __add__(self, other: "LegOperator") -> "LegOperator":
        self._compat(other)
        return LegOperator(self.dim, self.legs, matadd(self.entries, other.entries))

    def __sub__(self, other: "LegOperator") -> "LegOperator":
        self._compat(other)
        return LegOperator(self.dim, self.legs, matadd(self.entries, other.entries, -ONE))

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s) -> "LegOperator":
        return LegOperator(self.dim, self.legs, matscale(self.entries, s))

    __rmul__ = lambda self, s: self.scale(s)

    def tensor(self, other: "LegOperator") -> "LegOperator":
        if self.dim != other.dim:
            raise ValueError("tensor factors must share dim V")
        return LegOperator(self.dim, self.legs + other.legs, kron(self.entries, other.entries))

    def inverse(self) -> "LegOperator":
        return LegOperator(self.dim, self.legs, inverse(self.entries))

    def transpose(self) -> "LegOperator":
        return LegOperator(self.dim, self.legs, transpose(self.entries))

    def trace(self) -> Fraction:
        return trace(self.entries)

    def is_zero(self) -> bool:
        return is_zero(self.entries)

    def power(self, k: int) -> "LegOperator":
        out = LegOperator.identity(self.dim, self.legs)
        for _ in range(k):
            out = out @ self
        return out

    def __getitem__(self, idx):
        row, col = idx
        return self.entries[self._flat(row)][self._flat(col)]

    def _flat(self, idx) -> int:
        if isinstance(idx, int):
            return idx
        return multi_to_flat(idx, self.dim)

    def _compat(self, other):
        if (self.dim, self.legs) != (other.dim, other.legs):
            raise ValueError(f"incompatible operators: dim/legs {(self.dim, self.legs)} vs "
                             f"{(other.dim, other.legs)}")

    def apply_basis(self, multi_index: Sequence[int]) -> Dict[Tuple[int, ...], Fraction]:
        """Image of a basis tensor, as {multi-index: coefficient}."""
        col = multi_to_flat(multi_index, self.dim)
        return {flat_to_multi(i, self.dim, self.legs): row[col]
                for i, row in enumerate(self.entries) if row[col]}

    def to_json(self) -> dict:
        return {"dim": self.dim, "legs": self.legs,
                "entries": [[str(x) for x in row] for row in self.entries]}

    @classmethod
    def from_json(cls, data) -> "LegOperator":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["dim"]), int(data["legs"]), mat(
            [[Fraction(str(x)) for x in row] for row in data["entries"]]))


def multi_to_flat(idx: Sequence[int], n: int) -> int:
    out = 0
    for i in idx:
        if not 0 <= i < n:
            raise IndexError(f"index {i} out of range for dim {n}")
        out = out * n + i
    return out


def flat_to_multi(flat: int, n: int, legs: int) -> Tuple[int, ...]:
    out = []
    for _ in range(legs):
        flat, r = divmod(flat, n)
        out.append(r)
    return tuple(reversed(out))


def flip(n: int) -> LegOperator:
    """P(e_a (x) e_b) = e_b (x) e_a."""
    if n < 1:
        raise ValueError("dim must be >= 1")
    size = n * n
    rows = [[ZERO] * size for _ in range(size)]
    for a in range(n):
        for b in range(n):
            rows[b * n + a][a * n + b] = ONE
    return LegOperator(n, 2, tuple(tuple(r) for r in rows))


def embed_leg(op: LegOperator, position: int, total: int) -> LegOperator:
    """I^{(x)(position-1)} (x) op (x) I^{(x)(total-position-legs+1)} (1-based position)."""
    if not 1 <= position <= total - op.legs + 1:
        raise ValueError(f"cannot place a {op.legs}-leg operator at leg {position} of {total}")
    n = op.dim
    out = op
    if position > 1:
        out = LegOperator.identity(n, position - 1).tensor(out)
    rest = total - position - op.legs + 1
    if rest > 0:
        out = out.tensor(LegOperator.identity(n, rest))
    return out


def permute_legs(op: LegOperator, perm: Sequence[int]) -> LegOperator:
    """Relabel legs: leg ``t`` of ``op`` becomes leg ``perm[t]`` (0-based) of the result."""
    n, N = op.dim, op.legs
    if sorted(perm) != list(range(N)):
        raise ValueError("perm must be a permutation of the legs")
    size = n ** N
    new_of_old = []
    for flat in range(size):
        mi = flat_to_multi(flat, n, N)
        new = [0] * N
        for t, p in enumerate(perm):
            new[p] = mi[t]
        new_of_old.append(multi_to_flat(new, n))
    rows = [[ZERO] * size for _ in range(size)]
    for i, row in enumerate(op.entries):
        for j, x in enumerate(row):
            if x:
                rows[new_of_old[i]][new_of_old[j]] = x
    return LegOperator(n, N, tuple(tuple(r) for r in rows))


def partial_trace(op: LegOperator, leg: int) -> LegOperator:
    """Trace out leg ``leg`` (1-based); tracing the last remaining leg gives a 1x1 operator."""
    n, N = op.dim, op.legs
    if not 1 <= leg <= N:
        raise ValueError(f"leg {leg} out of range 1..{N}")
    size = n ** (N - 1)
    rows = [[ZERO] * size for _ in range(size)]
    t = leg - 1
    for i in range(size):
        mi = flat_to_multi(i, n, N - 1) if N > 1 else ()
        for j in range(size):
            mj = flat_to_multi(j, n, N - 1) if N > 1 else ()
            acc = ZERO
            for s in range(n):
                fi = multi_to_flat(mi[:t] + (s,) + mi[t:], n)
                fj = multi_to_flat(mj[:t] + (s,) + mj[t:], n)
                acc += op.entries[fi][fj]
            rows[i][j] = acc
    return LegOperator(n, N - 1, tuple(tuple(r) for r in rows))


def partial_traces(op: LegOperator, legs: Iterable[int]) -> LegOperator:
    """Trace out several legs (1-based, original numbering)."""
    out = op
    for leg in sorted(legs, reverse=True):
        out = partial_trace(out, leg)
    return out


def matrix_unit(n: int, i: int, j: int) -> Matrix:
    return tuple(tuple(ONE if (a, b) == (i, j) else ZERO for b in range(n)) for a in range(n))

