"""Reflection Equation algebras as quotients of free algebras, checked by bounded linear algebra.

Generators are :class:`Gen` labels at the current point; words are tuples of
labels with no reordering.  Ideal membership at a degree bound is a rank
computation over the span of ``x * rel * y``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .braiding import Braiding, b_product
from .reports import CheckReport, Timer, report
from .scalar import alpha_coeff
from .symalg import SITE_V, Gen
from .tensorops import LegOperator, Matrix, RowSpace, kron, matmul, matrix_unit

Word = Tuple[Gen, ...]


class BoundTooSmall(ValueError):
    pass


class NotHecke(ValueError):
    pass


class FreeElement:
    """Element of the free associative algebra on generator labels."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Word, Fraction]] = None):
        self.terms = {w: Fraction(c) for w, c in (terms or {}).items() if c}

    @classmethod
    def word(cls, *gens: Gen, coeff=1) -> "FreeElement":
        return cls({tuple(gens): Fraction(coeff)})

    @classmethod
    def one(cls, coeff=1) -> "FreeElement":
        return cls({(): Fraction(coeff)})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, FreeElement) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    @property
    def degree(self) -> int:
        return max((len(w) for w in self.terms), default=-1)

    def part(self, degree: int) -> "FreeElement":
        return FreeElement({w: c for w, c in self.terms.items() if len(w) == degree})

    def generators(self) -> set:
        return {g for w in self.terms for g in w}

    def __add__(self, other: "FreeElement") -> "FreeElement":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, 0) + c
        return FreeElement(out)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "FreeElement":
        return FreeElement({w: c * s for w, c in self.terms.items()})

    def __mul__(self, other: "FreeElement") -> "FreeElement":
        out: Dict[Word, Fraction] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                w = w1 + w2
                out[w] = out.get(w, 0) + c1 * c2
        return FreeElement(out)

    def substitute(self, image: Dict[Gen, "FreeElement"]) -> "FreeElement":
        out = FreeElement()
        for w, c in self.terms.items():
            t = FreeElement.one(c)
            for g in w:
                t = t * image.get(g, FreeElement.word(g))
            out = out + t
        return out

    def to_json(self) -> List[dict]:
        return [{"word": [g.to_json() for g in w], "coeff": str(c)} for w, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data) -> "FreeElement":
        return cls({tuple(Gen.from_json(g) for g in t["word"]): Fraction(t["coeff"]) for t in data})

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in sorted(self.terms.items()):
            m = "*".join(str(g) for g in w) or "1"
            parts.append(m if c == 1 and w else f"{c}*{m}" if w else str(c))
        return " + ".join(parts)

    __repr__ = __str__


@dataclass
class RelationSet:
    relations: List[FreeElement]
    source: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for rel in self.relations:
            if not rel.part(2):
                raise ValueError(f"relation without a degree-2 part: {rel}")

    def __len__(self):
        return len(self.relations)

    def generators(self) -> set:
        return set().union(*(r.generators() for r in self.relations)) if self.relations else set()

    def quadratic_span(self) -> RowSpace:
        return RowSpace(r.part(2).terms for r in self.relations)

    def span(self) -> RowSpace:
        return RowSpace(r.terms for r in self.relations)

    def to_json(self) -> dict:
        return {"source": self.source, "meta": self.meta, "relations": [r.to_json() for r in self.relations]}


# ---------------------------------------------------------------------------
# matrices with free-algebra entries (sparse)
# ---------------------------------------------------------------------------

FreeMatrix = Dict[Tuple[int, int], FreeElement]


def _leg1(n: int, der: int) -> FreeMatrix:
    """L^(der)_1 = L (x) I as a sparse n^2 x n^2 matrix."""
    out = {}
    for i, j, k in itertools.product(range(n), repeat=3):
        out[(i * n + k, j * n + k)] = FreeElement.word(Gen(SITE_V, der, i, j))
    return out


def _scalar_left(op: LegOperator, X: FreeMatrix) -> FreeMatrix:
    out: FreeMatrix = {}
    e = op.entries
    by_row: Dict[int, List[Tuple[int, FreeElement]]] = {}
    for (r, c), x in X.items():
        by_row.setdefault(r, []).append((c, x))
    for i, row in enumerate(e):
        for k, a in enumerate(row):
            if a and k in by_row:
                for c, x in by_row[k]:
                    out[(i, c)] = out.get((i, c), FreeElement()) + x.scale(a)
    return {k: v for k, v in out.items() if v}


def _scalar_right(X: FreeMatrix, op: LegOperator) -> FreeMatrix:
    out: FreeMatrix = {}
    e = op.entries
    for (r, k), x in X.items():
        for j, a in enumerate(e[k]):
            if a:
                out[(r, j)] = out.get((r, j), FreeElement()) + x.scale(a)
    return {k: v for k, v in out.items() if v}


def _matmul(X: FreeMatrix, Y: FreeMatrix) -> FreeMatrix:
    by_row: Dict[int, List[Tuple[int, FreeElement]]] = {}
    for (r, c), y in Y.items():
        by_row.setdefault(r, []).append((c, y))
    out: FreeMatrix = {}
    for (r, k), x in X.items():
        for c, y in by_row.get(k, ()):
            out[(r, c)] = out.get((r, c), FreeElement()) + x * y
    return {k: v for k, v in out.items() if v}


def _combine(*parts: Tuple[Fraction, FreeMatrix]) -> FreeMatrix:
    out: FreeMatrix = {}
    for s, X in parts:
        for k, x in X.items():
            out[k] = out.get(k, FreeElement()) + x.scale(s)
    return {k: v for k, v in out.items() if v}


def _reflection(R: LegOperator, n: int, k: int, l: int, m: int, coeff) -> List[FreeElement]:
    """Entries of R L1^(k) R L1^(l) - L1^(l) R L1^(k) R - coeff (R L1^(m) - L1^(m) R)."""
    Lk, Ll, Lm = _leg1(n, k), _leg1(n, l), _leg1(n, m)
    first = _matmul(_scalar_right(_scalar_left(R, Lk), R), Ll)
    second = _scalar_right(_matmul(_scalar_right(Ll, R), Lk), R)
    parts = [(Fraction(1), first), (Fraction(-1), second)]
    if coeff:
        parts += [(-coeff, _scalar_left(R, Lm)), (coeff, _scalar_right(Lm, R))]
    M = _combine(*parts)
    return [M[key] for key in sorted(M)]


def re_relations(R: Braiding, hbar=0) -> RelationSet:
    """R L1 R L1 - L1 R L1 R = hbar (R L1 - L1 R), component-wise."""
    hbar = Fraction(hbar)
    rels = _reflection(R.mat, R.dim, 0, 0, 0, hbar)
    return RelationSet(rels, "RE", {"braiding": R.name, "n": R.dim, "hbar": str(hbar)})


def rea_relations(R: Braiding, r: int, k_max: int) -> RelationSet:
    """R L1^(k) R L1^(l) - L1^(l) R L1^(k) R = alpha_r(k,l) (R L1^(k+l+r) - L1^(k+l+r) R), k, l <= k_max."""
    rels = []
    for k in range(k_max + 1):
        for l in range(k_max + 1):
            rels += _reflection(R.mat, R.dim, k, l, k + l + r, alpha_coeff(r, k, l))
    return RelationSet(rels, "REA", {"braiding": R.name, "n": R.dim, "r": r, "k_max": k_max})


def _rw_pair(RW: LegOperator, n: int, x: Gen, y: Gen) -> Dict[Tuple[Gen, Gen], Fraction]:
    """R_W(x (x) y); derivative orders travel with their factors."""
    a, b = x.row * n + x.col, y.row * n + y.col
    out = {}
    for (c, d), coeff in RW.apply_basis((a, b)).items():
        gc = Gen(SITE_V, y.der, *divmod(c, n))
        gd = Gen(SITE_V, x.der, *divmod(d, n))
        out[(gc, gd)] = coeff
    return out


def braided_commutativity_relations(R: Braiding, ders: Sequence[int] = (0,)) -> RelationSet:
    """x (x) y - R_W(x (x) y) for all generator pairs, i.e. Im(I - R_W)."""
    n = R.dim
    rels = []
    gens = [Gen(SITE_V, k, i, j) for k in ders for i in range(n) for j in range(n)]
    for x, y in itertools.product(gens, repeat=2):
        e = FreeElement.word(x, y)
        for (p, q), c in _rw_pair(R.rw, n, x, y).items():
            e = e - FreeElement.word(p, q, coeff=c)
        if e:
            rels.append(e)
    return RelationSet(rels, "Im(I-R_W)", {"braiding": R.name, "n": n})


def same_relation_span(a: RelationSet, b: RelationSet) -> bool:
    return a.span().same_span(b.span())


# ---------------------------------------------------------------------------
# bounded ideal membership
# ---------------------------------------------------------------------------

def _words(alphabet: Sequence[Gen], max_len: int) -> List[Word]:
    out: List[Word] = [()]
    for length in range(1, max_len + 1):
        out += list(itertools.product(alphabet, repeat=length))
    return out


def ideal_slice(rels: RelationSet, degree_bound: int, alphabet: Optional[Iterable[Gen]] = None) -> RowSpace:
    """span{ x * rel * y : deg(x) + deg(rel) + deg(y) <= degree_bound }."""
    alpha = sorted(set(alphabet) if alphabet is not None else rels.generators())
    space = RowSpace()
    for rel in rels.relations:
        room = degree_bound - rel.degree
        if room < 0:
            continue
        words = _words(alpha, room)
        for x in words:
            for y in words:
                if len(x) + len(y) <= room:
                    space.add((FreeElement.word(*x) * rel * FreeElement.word(*y)).terms)
    return space


def ideal_membership(e: FreeElement, rels: RelationSet, degree_bound: int) -> bool:
    """True iff e is in the degree-bounded slice of the two-sided ideal generated by ``rels``."""
    if e.degree > degree_bound:
        raise BoundTooSmall(f"element of degree {e.degree} exceeds the bound {degree_bound}")
    alphabet = rels.generators() | e.generators()
    return ideal_slice(rels, degree_bound, alphabet).contains(e.terms)


# ---------------------------------------------------------------------------
# the change of generators between the two RE algebras
# ---------------------------------------------------------------------------

def _hecke_q(R: Braiding, q=None) -> Fraction:
    if not R.kind.is_hecke:
        raise NotHecke(f"{R.name} is {R.kind}, not a Hecke symmetry")
    kq = R.kind.q
    if q is not None and Fraction(q) != kq:
        raise NotHecke(f"q = {q} does not match the braiding's Hecke parameter {kq}")
    if kq in (1, -1):
        raise NotHecke("the change map degenerates at q = +-1")
    return kq


def check_change_map(R: Braiding, q=None, hbar=1) -> CheckReport:
    """L -> hbar I - (q - q^-1) L carries non-modified RE relations into the modified ideal, and back."""
    q = _hecke_q(R, q)
    hbar = Fraction(hbar)
    lam = q - 1 / q
    n = R.dim
    params = {"braiding": R.name, "n": n, "q": str(q), "hbar": str(hbar)}
    with Timer() as t:
        witness = None
        plain = re_relations(R, 0)
        modified = re_relations(R, hbar)
        gens = [Gen(SITE_V, 0, i, j) for i in range(n) for j in range(n)]
        forward = {g: FreeElement.one(hbar if g.row == g.col else 0) - FreeElement.word(g, coeff=lam) for g in gens}
        backward = {g: (FreeElement.one(hbar if g.row == g.col else 0) - FreeElement.word(g)).scale(1 / lam)
                    for g in gens}
        for label, source, target, image in (("forward", plain, modified, forward),
                                             ("backward", modified, plain, backward)):
            space = ideal_slice(target, 2, gens)
            for rel in source.relations:
                img = rel.substitute(image)
                if not space.contains(img.terms):
                    witness = f"{label}: image of {rel} is {img}, outside the ideal"
                    break
            if witness:
                break
    return report("change_map", params, witness, t)


def check_relation_spans(R: Braiding, expect_equal: Optional[bool] = None) -> CheckReport:
    """Compare span(RE relations at hbar = 0) with span(Im(I - R_W))."""
    params = {"braiding": R.name, "n": R.dim, "kind": str(R.kind)}
    with Timer() as t:
        equal = same_relation_span(re_relations(R, 0), braided_commutativity_relations(R))
        if expect_equal is None:
            expect_equal = R.kind.is_involutive
        params["equal"] = equal
        params["expected"] = expect_equal
        witness = None if equal == expect_equal else f"spans {'agree' if equal else 'differ'}"
    return report("relation_spans", params, witness, t)


# ---------------------------------------------------------------------------
# braided Lie bracket on W
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class StructureTensor:
    """[l_a, l_b] = sum_m c[m][a * n^2 + b] l_m with a = i * n + j."""

    n: int
    c: Matrix

    def bracket(self, a: int, b: int) -> Dict[int, Fraction]:
        n2 = self.n * self.n
        return {m: self.c[m][a * n2 + b] for m in range(n2) if self.c[m][a * n2 + b]}


@dataclass
class LieChecks:
    tensor: StructureTensor
    jacobi: bool
    skew_symmetry: bool
    cross_scalar: Optional[Fraction]
    cross_transposed_B: Optional[bool]

    @property
    def passed(self) -> bool:
        return self.jacobi and self.skew_symmetry and self.cross_scalar is not None


def _ident(m: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(m)) for i in range(m))


def lie_structure(R: Braiding) -> StructureTensor:
    """Coefficients of {L_1bar, L_2bar} = L_1bar R^-1 - R^-1 L_1bar in the frame M_ab."""
    n = R.dim
    Rinv = R.mat_inv
    eye = LegOperator.identity(n)
    targets = []
    for i in range(n):
        for j in range(n):
            E = LegOperator(n, 1, matrix_unit(n, i, j)).tensor(eye)
            targets.append(E @ Rinv - Rinv @ E)
    return StructureTensor(n, R.frame.structure(targets))


def _proportional(a: Matrix, b: Matrix) -> Optional[Fraction]:
    """s with a = s * b, or None."""
    s = None
    for ra, rb in zip(a, b):
        for x, y in zip(ra, rb):
            if y == 0:
                if x != 0:
                    return None
                continue
            if s is None:
                s = x / y
            elif x != s * y:
                return None
    return s


def braided_lie_constants(R: Braiding) -> LieChecks:
    """Structure tensor plus braided Jacobi, skew-symmetry and the comparison with o_B (I - Q)."""
    T = lie_structure(R)
    c = T.c
    m = R.dim ** 2
    Q = R.q_op.entries
    Qinv = R.q_op.inverse().entries
    I = _ident(m)
    c_23 = kron(I, c)
    c_12 = kron(c, I)
    q_12 = kron(Q, I)
    left = matmul(c, c_23)
    right = [[x + y for x, y in zip(r1, r2)]
             for r1, r2 in zip(matmul(c, c_12), matmul(matmul(c, c_23), q_12))]
    jacobi = [list(r) for r in left] == right
    qq = R.kind.q if R.kind.q is not None else Fraction(1)
    big = m * m
    sym = tuple(tuple((qq ** 2 + qq ** -2) * (1 if i == j else 0) + Q[i][j] + Qinv[i][j] for j in range(big))
                for i in range(big))
    skew = all(x == 0 for row in matmul(c, sym) for x in row)
    i_minus_q = tuple(tuple((1 if i == j else 0) - Q[i][j] for j in range(big)) for i in range(big))
    scalar, transposed = None, None
    for flag in (False, True):
        s = _proportional(c, matmul(b_product(R.skew.b_op, flag), i_minus_q))
        if s is not None and s != 0:
            scalar, transposed = s, flag
            break
    return LieChecks(T, jacobi, skew, scalar, transposed)


def check_braided_lie(R: Braiding) -> CheckReport:
    params = {"braiding": R.name, "n": R.dim, "kind": str(R.kind)}
    with Timer() as t:
        res = braided_lie_constants(R)
        params["cross_scalar"] = None if res.cross_scalar is None else str(res.cross_scalar)
        bad = [name for name, ok in (("jacobi", res.jacobi), ("skew_symmetry", res.skew_symmetry),
                                     ("cross_check", res.cross_scalar is not None)) if not ok]
        witness = f"failed: {', '.join(bad)}" if bad else None
    return report("braided_lie", params, witness, t)


def gl_structure(n: int) -> StructureTensor:
    """[e_i^j, e_k^l] = delta_k^j e_i^l - delta_i^l e_k^j."""
    m = n * n
    c = [[Fraction(0)] * (m * m) for _ in range(m)]
    for i, j, k, l in itertools.product(range(n), repeat=4):
        ab = (i * n + j) * m + (k * n + l)
        if k == j:
            c[i * n + l][ab] += 1
        if i == l:
            c[k * n + j][ab] -= 1
    return StructureTensor(n, tuple(tuple(r) for r in c))


# ---------------------------------------------------------------------------
# coproduct on the relations, degree 2
# ---------------------------------------------------------------------------

Pair = Tuple[Word, Word]
TensorElement = Dict[Pair, Fraction]


def _t_add(out: TensorElement, key: Pair, c):
    v = out.get(key, 0) + c
    if v:
        out[key] = v
    else:
        out.pop(key, None)


def _delta_gen(g: Gen, n: int, lam: Fraction) -> TensorElement:
    out: TensorElement = {}
    _t_add(out, ((g,), ()), 1)
    _t_add(out, ((), (g,)), 1)
    if lam:
        for k in range(n):
            _t_add(out, ((Gen(g.site, g.der, g.row, k),), (Gen(g.site, g.der, k, g.col),)), -lam)
    return out


def _t_mul(x: TensorElement, y: TensorElement, RW: LegOperator, n: int) -> TensorElement:
    """(a (x) b)(c (x) d) = a c~ (x) b~ d with c~ (x) b~ = R_W(b (x) c)."""
    out: TensorElement = {}
    for (a, b), c1 in x.items():
        for (cw, d), c2 in y.items():
            if not b or not cw:
                _t_add(out, (a + cw, b + d), c1 * c2)
                continue
            if len(b) != 1 or len(cw) != 1:
                raise BoundTooSmall("crossing is implemented for single generators only")
            for (ct, bt), c3 in _rw_pair(RW, n, b[0], cw[0]).items():
                _t_add(out, (a + (ct,), (bt,) + d), c1 * c2 * c3)
    return out


def _delta(e: FreeElement, RW: LegOperator, n: int, lam: Fraction) -> TensorElement:
    out: TensorElement = {}
    for w, c in e.terms.items():
        t: TensorElement = {((), ()): Fraction(1)}
        for g in w:
            t = _t_mul(t, _delta_gen(g, n, lam), RW, n)
        for k, v in t.items():
            _t_add(out, k, v * c)
    return out


def check_coproduct(R: Braiding, q=None, degree: int = 2, hbar=1,
                    relations: Optional[RelationSet] = None) -> CheckReport:
    """Delta of each relation lies in I (x) A + A (x) I, both sides bounded in degree.

    Involutive R: Delta l = l (x) 1 + 1 (x) l.  Hecke R (hbar != 0):
    Delta l_i^j = l_i^j (x) 1 + 1 (x) l_i^j - ((q - q^-1) / hbar) sum_k l_i^k (x) l_k^j.
    Products cross through R_W.
    """
    if degree < 2:
        raise BoundTooSmall("relations have degree 2")
    if degree > 2:
        raise BoundTooSmall("only degree 2 is verified")
    hbar = Fraction(hbar)
    n = R.dim
    if R.kind.is_involutive:
        lam = Fraction(0)
    else:
        qq = _hecke_q(R, q)
        if not hbar:
            raise ValueError("the Hecke coproduct is written for hbar != 0")
        lam = (qq - 1 / qq) / hbar
    rels = relations if relations is not None else re_relations(R, hbar)
    params = {"braiding": R.name, "n": n, "kind": str(R.kind), "hbar": str(hbar), "source": rels.source,
              "relations": len(rels)}
    with Timer() as t:
        witness = None
        side = degree * (2 if lam else 1)
        alphabet = sorted(rels.generators())
        space = RowSpace()
        for rel in rels.relations:
            for w in _words(alphabet, side - rel.degree if lam else 0):
                for key in ((rel, w), (w, rel)):
                    vec = {}
                    if isinstance(key[0], FreeElement):
                        for word, c in key[0].terms.items():
                            vec[(word, key[1])] = c
                    else:
                        for word, c in key[1].terms.items():
                            vec[(key[0], word)] = c
                    space.add(vec)
        for rel in rels.relations:
            d = _delta(rel, R.rw, n, lam)
            if not space.contains(d):
                rest = space.reduce(d)
                k, v = next(iter(sorted(rest.items())))
                witness = f"Delta({rel}) leaves the ideal; residue term {v} * {_pair_str(k)}"
                break
    return report("coproduct", params, witness, t)


def _pair_str(p: Pair) -> str:
    a, b = p
    return f"{'*'.join(map(str, a)) or '1'} (x) {'*'.join(map(str, b)) or '1'}"
