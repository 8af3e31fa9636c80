"""Braidings on V (x) V and the structures they induce.

Covers Yang-Baxter and minimal-polynomial analysis, the skew-inverse Psi with
the operators B and C, the R-trace, the extension of R to V and its dual V*,
the braiding R_W on W (x) W with W = V (x) V* = span(l_i^j), the operator Q,
and commutation factors of monomial R_W.

W is identified with span(l_i^j) by x_i (x) x^j -> l_i^j, basis index
``i * n + j``.  Operators on W (x) W are returned as LegOperators with
``dim = n * n`` and ``legs = 2``; this matches the 4-leg V-basis order exactly.

Two views of R are kept apart.  ``Braiding.matrix`` is the operator on basis
tensors (``matrix[out][in]``) and drives the dual extension and R_W.  Matrix
identities in L (L_2bar = R L_1 R^{-1}, [L_1, R], ...) are written with
``Braiding.mat``, the transpose, whose rows are indexed by the input pair as
in R(x_i (x) x_j) = R_ij^kl x_k (x) x_l.  With this reading
R_W (L_1bar (.) L_2bar) = L_2bar (.) L_1bar holds for every preset.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from .symalg import ColorTable
from .tensorops import (InconsistentSystem, LegOperator, Matrix, SingularSystem, embed_leg, flip,
                        inverse, kron, matmul, matrix_unit, mat, partial_trace,
                        solve_overdetermined, transpose)


class ValidationFailed(ValueError):
    def __init__(self, what: str, witness=None, detail: str = ""):
        self.what, self.witness = what, witness
        msg = f"{what} check failed"
        if witness is not None:
            msg += f" at basis vector {witness}"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NotSkewInvertible(ValueError):
    pass


class ExtensionInconsistent(RuntimeError):
    pass


class NonMonomial(ValueError):
    def __init__(self, pair, detail=""):
        self.pair = pair
        super().__init__(f"R_W is not monomial at l{pair[0]} (x) l{pair[1]}" + (f": {detail}" if detail else ""))


# ---------------------------------------------------------------------------
# classification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Kind:
    name: str  # "involutive" | "hecke" | "general"
    q: Optional[Fraction] = None

    def __str__(self):
        return f"hecke({self.q})" if self.name == "hecke" else self.name

    @property
    def is_involutive(self) -> bool:
        return self.name == "involutive"

    @property
    def is_hecke(self) -> bool:
        return self.name == "hecke"


INVOLUTIVE = Kind("involutive")
GENERAL = Kind("general")


def _rational_sqrt(x: Fraction) -> Optional[Fraction]:
    if x < 0:
        return None
    a, b = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if a * a == x.numerator and b * b == x.denominator:
        return Fraction(a, b)
    return None


def ybe_witness(R: LegOperator) -> Optional[Tuple[int, ...]]:
    """First basis vector of V^3 where R12 R23 R12 and R23 R12 R23 differ, else None."""
    r12, r23 = embed_leg(R, 1, 3), embed_leg(R, 2, 3)
    lhs = (r12 @ r23 @ r12).entries
    rhs = (r23 @ r12 @ r23).entries
    cols_l, cols_r = transpose(lhs), transpose(rhs)
    for c, (a, b) in enumerate(zip(cols_l, cols_r)):
        if a != b:
            return tuple(i + 1 for i in _multi(c, R.dim, 3))
    return None


def _multi(flat, n, legs):
    out = []
    for _ in range(legs):
        flat, r = divmod(flat, n)
        out.append(r)
    return tuple(reversed(out))


def quadratic_relation(X: LegOperator) -> Optional[Tuple[Fraction, Fraction]]:
    """(a, b) with X^2 = a X + b I if {I, X, X^2} are dependent (X not scalar), else None.

    A scalar X returns (x, 0).
    """
    size = X.size
    I = LegOperator.identity(X.dim, X.legs)
    x0 = X.entries[0][0]
    if X == I.scale(x0):
        return x0, Fraction(0)
    X2 = X @ X
    cols = [[X.entries[i][j], I.entries[i][j]] for i in range(size) for j in range(size)]
    rhs = [X2.entries[i][j] for i in range(size) for j in range(size)]
    try:
        a, b = solve_overdetermined(cols, rhs)
    except (InconsistentSystem, SingularSystem):
        return None
    return a, b


def classify(R: LegOperator) -> Kind:
    rel = quadratic_relation(R)
    if rel is None:
        return GENERAL
    lam, mu = rel
    if lam == 0 and mu == 1:
        return INVOLUTIVE
    if mu != 1:
        return GENERAL
    # R^2 = lam R + I  <=>  (R - q)(R + 1/q) = 0 with q - 1/q = lam
    s = _rational_sqrt(lam * lam + 4)
    if s is None:
        return GENERAL
    roots = [(lam + s) / 2, (lam - s) / 2]
    q = max(roots, key=lambda t: (abs(t), t))
    return Kind("hecke", q)


@dataclass(frozen=True)
class AnalysisReport:
    ybe: bool
    classification: Kind
    witness: Optional[Tuple[int, ...]] = None

    def to_dict(self) -> dict:
        return {"ybe": self.ybe, "classification": str(self.classification),
                "witness": list(self.witness) if self.witness else None}


def analyze(R) -> AnalysisReport:
    R = R.matrix if isinstance(R, Braiding) else R
    if R.legs != 2:
        raise ValueError("a braiding acts on two legs")
    w = ybe_witness(R)
    return AnalysisReport(w is None, classify(R), w)


# ---------------------------------------------------------------------------
# braidings
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SkewData:
    psi: LegOperator
    b_op: Matrix
    c_op: Matrix


@dataclass(frozen=True)
class DualExtension:
    """Blocks of R on V(x)V, V(x)V* -> V*(x)V, V*(x)V -> V(x)V*, V*(x)V*.

    Entry convention as for every LegOperator: ``vv_star[(a, b), (i, j)]`` is the
    coefficient of x^a (x) x_b in R(x_i (x) x^j).
    """

    vv: LegOperator
    vv_star: LegOperator
    v_star_v: LegOperator
    v_star_v_star: LegOperator


@dataclass(frozen=True, eq=False)
class Braiding:
    matrix: LegOperator
    kind: Kind
    name: str = "custom"

    @property
    def dim(self) -> int:
        return self.matrix.dim

    @cached_property
    def inverse(self) -> LegOperator:
        return self.matrix if self.kind.is_involutive else self.matrix.inverse()

    @cached_property
    def mat(self) -> LegOperator:
        """R in matrix identities: rows indexed by the input pair, R_ij^kl."""
        return self.matrix.transpose()

    @cached_property
    def mat_inv(self) -> LegOperator:
        return self.inverse.transpose()

    @cached_property
    def skew(self) -> SkewData:
        return _solve_skew(self.matrix)

    @cached_property
    def dual(self) -> DualExtension:
        return _solve_dual(self.matrix)

    @cached_property
    def frame(self) -> "PairFrame":
        return PairFrame(self)

    @cached_property
    def rw(self) -> LegOperator:
        return _rw(self.dual)

    @cached_property
    def q_op(self) -> LegOperator:
        return self.frame.q_operator()

    def to_json(self) -> dict:
        d = self.matrix.to_json()
        d["kind"] = str(self.kind)
        d["name"] = self.name
        return d

    def __repr__(self):
        return f"Braiding({self.name}, n={self.dim}, {self.kind})"


def _op_from_images(n: int, images: Dict[Tuple[int, int], Dict[Tuple[int, int], Fraction]]) -> LegOperator:
    size = n * n
    rows = [[Fraction(0)] * size for _ in range(size)]
    for (i, j), img in images.items():
        for (a, b), c in img.items():
            rows[a * n + b][i * n + j] += c
    return LegOperator.from_rows(n, 2, rows)


def flip_braiding(n: int) -> Braiding:
    return Braiding(flip(n), INVOLUTIVE, "flip")


def diagonal_twist(factors: Sequence[Sequence]) -> Braiding:
    """R(x_i (x) x_j) = q_ij x_j (x) x_i with q_ij q_ji = 1 and q_ii^2 = 1."""
    qm = mat(factors)
    n = len(qm)
    for i in range(n):
        for j in range(n):
            if qm[i][j] * qm[j][i] != 1:
                raise ValidationFailed("symmetry", (i + 1, j + 1),
                                       f"q_{i+1}{j+1} q_{j+1}{i+1} = {qm[i][j] * qm[j][i]} != 1")
    R = _op_from_images(n, {(i, j): {(j, i): qm[i][j]} for i in range(n) for j in range(n)})
    return Braiding(R, INVOLUTIVE, "diag-twist")


def generic_twist_factors(n: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """q_ij = p_k for i < j with p_k successive primes, q_ji = 1 / q_ij, q_ii = 1."""
    primes = [p for p in range(2, 200) if all(p % d for d in range(2, math.isqrt(p) + 1))]
    q = [[Fraction(1)] * n for _ in range(n)]
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            q[i][j] = Fraction(primes[k])
            q[j][i] = 1 / q[i][j]
            k += 1
    return tuple(tuple(r) for r in q)


def dj_hecke(n: int, q) -> Braiding:
    """Standard Hecke symmetry: q on x_i(x)x_i, flip plus (q - 1/q) x_i(x)x_j for i < j."""
    q = Fraction(q)
    if q in (1, -1) or q == 0:
        raise ValidationFailed("symmetry", None, f"Hecke parameter q = {q} must not be 0 or +-1")
    lam = q - 1 / q
    images = {}
    for i in range(n):
        for j in range(n):
            if i == j:
                images[(i, j)] = {(i, i): q}
            elif i < j:
                images[(i, j)] = {(j, i): Fraction(1), (i, j): lam}
            else:
                images[(i, j)] = {(j, i): Fraction(1)}
    return Braiding(_op_from_images(n, images), Kind("hecke", q), "dj-hecke")


def custom_braiding(matrix, name: str = "custom") -> Braiding:
    op = matrix if isinstance(matrix, LegOperator) else None
    if op is None:
        rows = mat(matrix)
        n = math.isqrt(len(rows))
        if n * n != len(rows):
            raise ValueError("a braiding matrix has size n^2 x n^2")
        op = LegOperator(n, 2, rows)
    rep = analyze(op)
    if not rep.ybe:
        raise ValidationFailed("YBE", rep.witness)
    try:
        inverse(op.entries)
    except SingularSystem:
        raise ValidationFailed("invertibility", None, "braiding matrix is singular") from None
    return Braiding(op, rep.classification, name)


def make_braiding(kind: str, n: Optional[int] = None, q=None, factors=None, matrix=None) -> Braiding:
    """Dispatch on ``kind`` in {flip, diagonal_twist, dj_hecke, custom} and validate the result."""
    kind = kind.replace("-", "_")
    if kind == "flip":
        B = flip_braiding(n)
    elif kind in ("diagonal_twist", "diag_twist"):
        B = diagonal_twist(factors)
    elif kind == "dj_hecke":
        B = dj_hecke(n, q)
    elif kind == "custom":
        return custom_braiding(matrix)
    else:
        raise ValueError(f"unknown braiding kind {kind!r}")
    rep = analyze(B.matrix)
    if not rep.ybe:
        raise ValidationFailed("YBE", rep.witness)
    if rep.classification != B.kind:
        raise ValidationFailed("symmetry", None, f"expected {B.kind}, found {rep.classification}")
    return B


def braiding_from_json(data) -> Braiding:
    if isinstance(data, str):
        import json
        data = json.loads(data)
    op = LegOperator.from_json(data)
    if op.legs != 2:
        raise ValueError("braiding JSON must have legs = 2")
    B = custom_braiding(op, data.get("name", "custom"))
    declared = data.get("kind")
    if declared and declared != str(B.kind):
        raise ValidationFailed("symmetry", None, f"declared {declared}, found {B.kind}")
    return B


# ---------------------------------------------------------------------------
# skew-inverse, B, C and the R-trace
# ---------------------------------------------------------------------------

def _skew_identities(R: LegOperator, psi: LegOperator) -> Tuple[bool, bool]:
    P = flip(R.dim)
    first = partial_trace(embed_leg(R, 1, 3) @ embed_leg(psi, 2, 3), 2) == P
    second = partial_trace(embed_leg(psi, 1, 3) @ embed_leg(R, 2, 3), 2) == P
    return first, second


def _solve_skew(R: LegOperator) -> SkewData:
    # sum_{b,b'} R[(a,b),(d,b')] Psi[(b',c),(b,f)] = delta_af delta_cd;
    # one n^2 x n^2 matrix K[(a,d),(b',b)] serves every (c, f).
    n = R.dim
    size = n * n
    K = tuple(tuple(R[(a, b), (d, bp)] for bp in range(n) for b in range(n))
              for a in range(n) for d in range(n))
    try:
        Kinv = inverse(K)
    except SingularSystem:
        raise NotSkewInvertible("Tr_2 R_12 Psi_23 = P_13 has no solution") from None
    rows = [[Fraction(0)] * size for _ in range(size)]
    for bp in range(n):
        for c in range(n):
            for b in range(n):
                for f in range(n):
                    rows[bp * n + c][b * n + f] = Kinv[bp * n + b][f * n + c]
    psi = LegOperator.from_rows(n, 2, rows)
    first, second = _skew_identities(R, psi)
    if not (first and second):
        raise NotSkewInvertible("Psi solves the first defining identity but not the second")
    B = partial_trace(psi, 1).entries
    C = partial_trace(psi, 2).entries
    try:
        inverse(B)
    except SingularSystem:
        raise NotSkewInvertible("operator B is singular") from None
    return SkewData(psi, B, C)


def skew_inverse(R: Braiding) -> SkewData:
    return R.skew


def r_trace(C, A):
    """Tr(C . A); A may hold Fractions, algebra elements or rational functions."""
    n = len(C)
    rows = A.rows if hasattr(A, "rows") else A
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ValueError(f"R-trace needs an {n}x{n} matrix")
    acc = None
    for i in range(n):
        for j in range(n):
            c = C[i][j]
            if c:
                term = rows[j][i] * c
                acc = term if acc is None else acc + term
    if acc is None:
        return rows[0][0] * 0
    return acc


def embed_single(C: Matrix, leg: int, total: int) -> LegOperator:
    n = len(C)
    return embed_leg(LegOperator(n, 1, mat(C)), leg, total)


def r_trace_leg(C: Matrix, X: LegOperator, leg: int) -> LegOperator:
    """Tr_leg(C_leg X) for an exact multi-leg operator X."""
    if X.dim != len(C):
        raise ValueError("dimension mismatch between C and X")
    return partial_trace(embed_single(C, leg, X.legs) @ X, leg)


def r_trace_legs(C: Matrix, X: LegOperator, legs: Sequence[int]) -> LegOperator:
    out = X
    for leg in sorted(legs, reverse=True):
        out = r_trace_leg(C, out, leg)
    return out


# ---------------------------------------------------------------------------
# extension to the dual space and R_W
# ---------------------------------------------------------------------------

def _solve_block(n: int, coeff, rhs) -> LegOperator:
    """Solve for an unknown block X[(a,b),(j,k)] column by column.

    ``coeff(e, u)`` gives the coefficient of unknown row-index u=(a,b) in
    equation e=(c,i); ``rhs(e, col)`` the right-hand side for column col=(j,k).
    """
    size = n * n
    idx = list(itertools.product(range(n), repeat=2))
    A = [[coeff(e, u) for u in idx] for e in idx]
    cols = []
    for col in idx:
        try:
            cols.append(solve_overdetermined(A, [rhs(e, col) for e in idx]))
        except (InconsistentSystem, SingularSystem) as exc:
            raise ExtensionInconsistent(f"dual extension has no unique block: {exc}") from None
    return LegOperator(n, 2, tuple(tuple(cols[c][r] for c in range(size)) for r in range(size)))


def _d(a, b):
    return 1 if a == b else 0


def _solve_dual(R: LegOperator) -> DualExtension:
    n = R.dim
    # V*(x)V -> V(x)V*, from invariance on V(x)V*(x)V:
    #   sum_{a,b} R[(c,b),(i,a)] S[(a,b),(j,k)] = delta_ij delta_ck
    S = _solve_block(n, lambda e, u: R[(e[0], u[1]), (e[1], u[0])],
                     lambda e, col: _d(e[1], col[0]) * _d(e[0], col[1]))
    # V(x)V* -> V*(x)V, from invariance on V(x)V(x)V*:
    #   sum_{a,b} R[(a,b),(i,k)] T[(a,d),(b,l)] = delta_kl delta_id
    # unknowns T[(a,d),(b,l)] for fixed (d,l) are indexed by (a,b); equations by (i,k)
    size = n * n
    idx = list(itertools.product(range(n), repeat=2))
    A = [[R[(a, b), (i, k)] for (a, b) in idx] for (i, k) in idx]
    Trows = [[Fraction(0)] * size for _ in range(size)]
    for d in range(n):
        for l in range(n):
            try:
                x = solve_overdetermined(A, [_d(k, l) * _d(i, d) for (i, k) in idx])
            except (InconsistentSystem, SingularSystem) as exc:
                raise ExtensionInconsistent(f"no V(x)V* block: {exc}") from None
            for (a, b), val in zip(idx, x):
                Trows[a * n + d][b * n + l] = val
    T = LegOperator.from_rows(n, 2, Trows)
    # V*(x)V*: both invariance conditions with U = V*, solved jointly
    #   sum_{a,b} T[(c,b),(i,a)] U[(a,b),(j,l)] = delta_ij delta_cl
    #   sum_{a,b} S[(a,b),(i,k)] U[(a,d),(b,l)] = delta_kl delta_id
    unknowns = list(itertools.product(range(n), repeat=4))  # (a,b,j,l) -> U[(a,b),(j,l)]
    pos = {u: t for t, u in enumerate(unknowns)}
    eqs, rhs = [], []
    for c, i, j, l in itertools.product(range(n), repeat=4):
        row = [Fraction(0)] * len(unknowns)
        for a in range(n):
            for b in range(n):
                row[pos[(a, b, j, l)]] += T[(c, b), (i, a)]
        eqs.append(row)
        rhs.append(Fraction(_d(i, j) * _d(c, l)))
    for i, k, d, l in itertools.product(range(n), repeat=4):
        row = [Fraction(0)] * len(unknowns)
        for a in range(n):
            for b in range(n):
                row[pos[(a, d, b, l)]] += S[(a, b), (i, k)]
        eqs.append(row)
        rhs.append(Fraction(_d(k, l) * _d(i, d)))
    try:
        x = solve_overdetermined(eqs, rhs)
    except (InconsistentSystem, SingularSystem) as exc:
        raise ExtensionInconsistent(f"no V*(x)V* block: {exc}") from None
    Urows = [[Fraction(0)] * size for _ in range(size)]
    for (a, b, j, l), val in zip(unknowns, x):
        Urows[a * n + b][j * n + l] = val
    U = LegOperator.from_rows(n, 2, Urows)
    ext = DualExtension(R, T, S, U)
    bad = invariance_failures(ext)
    if bad:
        raise ExtensionInconsistent(f"extension violates invariance: {bad[0]}")
    return ext


def invariance_failures(E: DualExtension) -> List[str]:
    """Re-check the four pairing-invariance identities entry by entry."""
    R, T, S, U = E.vv, E.vv_star, E.v_star_v, E.v_star_v_star
    n = R.dim
    rng = range(n)
    out = []
    for c, i, j, k in itertools.product(rng, repeat=4):
        s1 = sum((R[(c, b), (i, a)] * S[(a, b), (j, k)] for a in rng for b in rng), Fraction(0))
        if s1 != _d(i, j) * _d(c, k):
            out.append(f"V(x)V*(x)V at {(c, i, j, k)}")
        s3 = sum((T[(c, b), (i, a)] * U[(a, b), (j, k)] for a in rng for b in rng), Fraction(0))
        if s3 != _d(i, j) * _d(c, k):
            out.append(f"V(x)V*(x)V* at {(c, i, j, k)}")
    for i, k, d, l in itertools.product(rng, repeat=4):
        s2 = sum((R[(a, b), (i, k)] * T[(a, d), (b, l)] for a in rng for b in rng), Fraction(0))
        if s2 != _d(k, l) * _d(i, d):
            out.append(f"V(x)V(x)V* at {(i, k, d, l)}")
        s4 = sum((S[(a, b), (i, k)] * U[(a, d), (b, l)] for a in rng for b in rng), Fraction(0))
        if s4 != _d(k, l) * _d(i, d):
            out.append(f"V*(x)V(x)V* at {(i, k, d, l)}")
    return out


def extend_to_dual(R: Braiding, S: Optional[SkewData] = None) -> DualExtension:
    if S is None:
        R.skew  # raises NotSkewInvertible early
    return R.dual


def _rw(E: DualExtension) -> LegOperator:
    # R_W = R_23 R_12 R_34 R_23 on V (x) V* (x) V (x) V*, rightmost factor acts first
    four = (embed_leg(E.vv_star, 2, 4) @ embed_leg(E.vv, 1, 4)
            @ embed_leg(E.v_star_v_star, 3, 4) @ embed_leg(E.v_star_v, 2, 4))
    n = E.vv.dim
    return LegOperator(n * n, 2, four.entries)


def rw_and_q(E) -> Tuple[LegOperator, LegOperator]:
    """(R_W, Q) in the generator basis; accepts a Braiding or its DualExtension."""
    if isinstance(E, Braiding):
        return E.rw, E.q_op
    rw = _rw(E)
    B = Braiding(E.vv, classify(E.vv), "extension")
    return rw, B.q_op


# ---------------------------------------------------------------------------
# the frame M(l_a (x) l_b) = L1bar (.) L2bar coefficient operators
# ---------------------------------------------------------------------------

class PairFrame:
    """Coordinates of V(x)V operators in the frame M_ab = (E_a(x)I) R (E_b(x)I) R^{-1}.

    ``L_1bar (.) L_2bar = sum_ab l_a l_b M_ab``; a matrix identity between such
    expressions is turned into an identity on W (x) W by taking coordinates.
    """

    def __init__(self, braiding: Braiding):
        self.braiding = braiding
        n = braiding.dim
        self.n = n
        R, Rinv = braiding.mat, braiding.mat_inv
        self.units = [LegOperator(n, 1, matrix_unit(n, i, j)).tensor(LegOperator.identity(n))
                      for i in range(n) for j in range(n)]
        self.M = [[self.units[a] @ R @ self.units[b] @ Rinv for b in range(n * n)] for a in range(n * n)]
        cols = [self._vec(self.M[a][b]) for a in range(n * n) for b in range(n * n)]
        try:
            self._inv = inverse(transpose(tuple(cols)))
        except SingularSystem:
            raise NotSkewInvertible("the map W (x) W -> End(V (x) V) is singular") from None

    @staticmethod
    def _vec(op: LegOperator) -> Tuple[Fraction, ...]:
        return tuple(x for row in op.entries for x in row)

    def coords(self, op: LegOperator) -> Tuple[Fraction, ...]:
        """c with sum_ab c[ab] M_ab = op."""
        v = self._vec(op)
        return tuple(sum((x * y for x, y in zip(row, v) if x and y), Fraction(0)) for row in self._inv)

    def operator_of(self, rows_fn) -> LegOperator:
        """Operator on W(x)W whose row ``c`` holds ``coords(rows_fn(c))``."""
        n2 = self.n * self.n
        size = n2 * n2
        rows = [self.coords(rows_fn(c)) for c in range(size)]
        return LegOperator(n2, 2, tuple(rows))

    def structure(self, targets: Sequence[LegOperator]) -> Tuple[Tuple[Fraction, ...], ...]:
        """W(x)W -> W map c[m][ab] with sum_ab c[m][ab] M_ab = targets[m]."""
        return tuple(self.coords(t) for t in targets)

    def q_operator(self) -> LegOperator:
        R, Rinv = self.braiding.mat, self.braiding.mat_inv
        n2 = self.n * self.n
        return self.operator_of(lambda c: Rinv @ self.M[c // n2][c % n2] @ R)

    def swapped_operator(self) -> LegOperator:
        """Operator X with X(L1bar (.) L2bar) = L2bar (.) L1bar, computed from the frame."""
        R, Rinv = self.braiding.mat, self.braiding.mat_inv
        n2 = self.n * self.n
        return self.operator_of(lambda c: R @ self.units[c // n2] @ Rinv @ self.units[c % n2])


# ---------------------------------------------------------------------------
# color factors, the B-product and the pairing
# ---------------------------------------------------------------------------

def extract_color_factors(RW: LegOperator) -> ColorTable:
    n2 = RW.dim
    n = math.isqrt(n2)
    table = {}
    for a in range(n2):
        for b in range(n2):
            img = {k: v for k, v in RW.apply_basis((a, b)).items()}
            pa, pb = divmod(a, n), divmod(b, n)
            if set(img) != {(b, a)}:
                raise NonMonomial(((pa[0] + 1, pa[1] + 1), (pb[0] + 1, pb[1] + 1)))
            table[(pa, pb)] = img[(b, a)]
    try:
        return ColorTable(n, table)
    except ValueError as exc:
        raise NonMonomial(((0, 0), (0, 0)), str(exc)) from None


def b_product(B: Matrix, transposed: bool = False) -> Matrix:
    """l_i^j o_B l_k^l = B_k^j l_i^l as an n^2 x n^4 matrix (W(x)W -> W).

    ``B_k^j`` is read as ``B[k][j]`` (or ``B[j][k]`` when ``transposed``).
    """
    n = len(B)
    rows = [[Fraction(0)] * n ** 4 for _ in range(n * n)]
    for i, j, k, l in itertools.product(range(n), repeat=4):
        b = B[j][k] if transposed else B[k][j]
        if b:
            rows[i * n + l][((i * n + j) * n + k) * n + l] += b
    return tuple(tuple(r) for r in rows)


def b_pairing(B: Matrix, transposed: bool = False) -> Matrix:
    """<l_i^j, l_k^l> = delta_i^l B_k^j as a 1 x n^4 matrix."""
    n = len(B)
    row = [Fraction(0)] * n ** 4
    for i, j, k, l in itertools.product(range(n), repeat=4):
        if i == l:
            row[((i * n + j) * n + k) * n + l] = B[j][k] if transposed else B[k][j]
    return (tuple(row),)


def _ident(m: int) -> Matrix:
    return tuple(tuple(Fraction(1) if i == j else Fraction(0) for j in range(m)) for i in range(m))


def invariance_of_map(f: Matrix, RW: LegOperator) -> Tuple[bool, bool]:
    """R-invariance of f : W(x)W -> U with U = W (f n^2 rows) or U = C (one row).

    Checks R(f (x) id) = (id (x) f) R_12 R_23 and R(id (x) f) = (f (x) id) R_23 R_12 on W^3,
    where R is R_W on U (x) W and the flip-like trivial map when U = C.
    """
    d = RW.dim
    r = RW.entries
    r12 = kron(r, _ident(d))
    r23 = kron(_ident(d), r)
    f_id = kron(f, _ident(d))
    id_f = kron(_ident(d), f)
    if len(f) == 1:
        lhs1, lhs2 = f_id, id_f
    else:
        lhs1, lhs2 = matmul(r, f_id), matmul(r, id_f)
    first = lhs1 == matmul(id_f, matmul(r12, r23))
    second = lhs2 == matmul(f_id, matmul(r23, r12))
    return first, second


# ---------------------------------------------------------------------------
# R-trace lemma
# ---------------------------------------------------------------------------

def random_operator(n: int, legs: int, rng, height: int = 9) -> LegOperator:
    """Seeded operator with rational entries of bounded height."""
    s = n ** legs
    return LegOperator(n, legs, tuple(tuple(Fraction(rng.randint(-height, height), rng.randint(1, height))
                                            for _ in range(s)) for _ in range(s)))


def check_rtrace_lemma(R: Braiding, samples: int = 5, seed: int = 0):
    """Skew-inverse identities, Tr^R_2 R_12 = I_1 and Tr^R_12 (R X R^{-1}) = Tr^R_12 X on random X."""
    import random
    from .reports import Timer, report
    params = {"braiding": R.name, "n": R.dim, "samples": samples, "seed": seed}
    rng = random.Random(seed)
    with Timer() as t:
        witness = None
        first, second = _skew_identities(R.matrix, R.skew.psi)
        if not (first and second):
            witness = f"skew-inverse identities hold: ({first}, {second})"
        C = R.skew.c_op
        M, Minv = R.mat, R.mat_inv
        if witness is None and r_trace_leg(C, M, 2) != LegOperator.identity(R.dim):
            witness = f"Tr^R_2 R_12 = {r_trace_leg(C, M, 2).entries}"
        for s in range(samples if witness is None else 0):
            X = random_operator(R.dim, 2, rng)
            lhs = r_trace_legs(C, M @ X @ Minv, (1, 2))
            rhs = r_trace_legs(C, X, (1, 2))
            if lhs != rhs:
                witness = f"sample {s}: Tr^R_12 RXR^-1 = {lhs.entries[0][0]} but Tr^R_12 X = {rhs.entries[0][0]}"
                break
    return report("rtrace_lemma", params, witness, t)
