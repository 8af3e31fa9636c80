"""Graded (color-)commutative polynomial algebra on the generators l_i^j^(k)[p].

A monomial is a sorted tuple of :class:`Gen` (repetition = multiplicity).
Generators are totally ordered by ``(site, der, row, col)``.  Without a color
table the algebra is commutative.  With a :class:`ColorTable` ``eps`` the
generators obey ``x y = eps(x, y) y x``; a product is normalised by sorting,
and the coefficient picks up ``eps(a, b)`` for every inverted pair ``a > b``.
Because ``eps(a, b) eps(b, a) = 1`` and ``eps(a, a) = 1`` this factor does not
depend on the order in which transpositions are made.

Coefficients may be any exact ring element supporting ``+``, ``*`` and
truthiness (Fraction, :class:`~.specfun.Poly2`, :class:`~.specfun.RationalFunction`).
"""
from __future__ import annotations

import itertools
import json
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .tensorops import LegOperator, Matrix, embed_leg, multi_to_flat

#: site labels; nonnegative sites are specialization components
SITE_V = -1  #: current spectral point v (local forms)
SITE_U = -2  #: second spectral point u (global forms)
SITE_CONST = 0  #: the constant matrix C


class ColorTableMismatch(ValueError):
    pass


class Gen(NamedTuple):
    """Generator l_{row}^{col} with derivative order ``der`` at ``site`` (0-based row/col)."""

    site: int
    der: int
    row: int
    col: int

    @property
    def entry(self) -> Tuple[int, int]:
        return self.row, self.col

    def shifted(self, k: int = 1) -> "Gen":
        return Gen(self.site, self.der + k, self.row, self.col)

    def at(self, site: int) -> "Gen":
        return Gen(site, self.der, self.row, self.col)

    def __str__(self):
        base = {SITE_CONST: "c"}.get(self.site, "l" if self.site < 0 else "a")
        s = f"{base}[{self.row + 1},{self.col + 1}]"
        if self.der:
            s += f"({self.der})"
        if self.site == SITE_U:
            s += "@u"
        elif self.site > 0:
            s += f"@{self.site}"
        return s

    def to_json(self) -> List[int]:
        return [self.row + 1, self.col + 1, self.der, self.site]

    @classmethod
    def from_json(cls, data) -> "Gen":
        row, col, der, site = data
        return cls(int(site), int(der), int(row) - 1, int(col) - 1)


def gen(i: int, j: int, der: int = 0, site: int = SITE_V) -> Gen:
    return Gen(site, der, i, j)


# ---------------------------------------------------------------------------
# color tables
# ---------------------------------------------------------------------------

class ColorTable:
    """Commutation factors eps((i,j),(k,l)) between generator entries."""

    def __init__(self, n: int, table: Mapping[Tuple[Tuple[int, int], Tuple[int, int]], Fraction]):
        self.n = n
        self._t = {k: Fraction(v) for k, v in table.items()}
        for a in itertools.product(range(n), repeat=2):
            for b in itertools.product(range(n), repeat=2):
                e = self._t.get((a, b))
                if e is None:
                    raise ValueError(f"color table misses the pair {a}, {b}")
                if e * self._t[(b, a)] != 1:
                    raise ValueError(f"eps{a, b} * eps{b, a} != 1")
            if self._t[(a, a)] != 1:
                raise ValueError(f"eps({a}, {a}) = {self._t[(a, a)]}; self-commutation must be 1")
        self.trivial = all(v == 1 for v in self._t.values())

    @classmethod
    def trivial_table(cls, n: int) -> "ColorTable":
        pairs = itertools.product(itertools.product(range(n), repeat=2), repeat=2)
        return cls(n, {p: Fraction(1) for p in pairs})

    def __call__(self, a: Gen, b: Gen) -> Fraction:
        return self._t[(a.row, a.col), (b.row, b.col)]

    def entry(self, a: Tuple[int, int], b: Tuple[int, int]) -> Fraction:
        return self._t[(a, b)]

    def values(self):
        return set(self._t.values())

    def __eq__(self, other):
        return isinstance(other, ColorTable) and self._t == other._t

    def __hash__(self):
        return hash(frozenset(self._t.items()))

    def to_json(self) -> Dict[str, str]:
        return {f"{a[0]+1},{a[1]+1}|{b[0]+1},{b[1]+1}": str(v)
                for (a, b), v in sorted(self._t.items())}

    @classmethod
    def from_json(cls, n: int, data) -> "ColorTable":
        if isinstance(data, str):
            data = json.loads(data)
        table = {}
        for key, val in data.items():
            a, b = key.split("|")
            a = tuple(int(x) - 1 for x in a.split(","))
            b = tuple(int(x) - 1 for x in b.split(","))
            table[(a, b)] = Fraction(val)
        return cls(n, table)


def _normal_order(seq: Sequence[Gen], color: Optional[ColorTable]):
    """Sorted monomial and the accumulated commutation factor."""
    mono = tuple(sorted(seq))
    if color is None or color.trivial:
        return mono, 1
    f = Fraction(1)
    for x in range(len(seq)):
        a = seq[x]
        for y in range(x + 1, len(seq)):
            b = seq[y]
            if a > b:
                f *= color(a, b)
    return mono, f


def _merge_factor(m1: Tuple[Gen, ...], m2: Tuple[Gen, ...], color: Optional[ColorTable]):
    if color is None or color.trivial:
        return 1
    f = Fraction(1)
    for a in m1:
        for b in m2:
            if a > b:
                f *= color(a, b)
    return f


# ---------------------------------------------------------------------------
# algebra elements
# ---------------------------------------------------------------------------

Monomial = Tuple[Gen, ...]


class AlgebraElement:
    """Normal-formed polynomial in the generators."""

    __slots__ = ("terms", "color")

    def __init__(self, terms: Optional[Mapping[Monomial, object]] = None,
                 color: Optional[ColorTable] = None):
        self.terms: Dict[Monomial, object] = {}
        self.color = color
        if terms:
            for m, c in terms.items():
                if c:
                    key, f = _normal_order(m, color)
                    c = c * f if f != 1 else c
                    s = self.terms.get(key)
                    s = c if s is None else s + c
                    if s:
                        self.terms[key] = s
                    else:
                        self.terms.pop(key, None)

    @classmethod
    def _raw(cls, terms, color):
        e = cls.__new__(cls)
        e.terms = terms
        e.color = color
        return e

    @classmethod
    def generator(cls, g: Gen, color: Optional[ColorTable] = None, coeff=Fraction(1)):
        return cls._raw({(g,): coeff} if coeff else {}, color)

    @classmethod
    def constant(cls, c, color: Optional[ColorTable] = None):
        return cls._raw({(): c} if c else {}, color)

    @classmethod
    def zero(cls, color: Optional[ColorTable] = None):
        return cls._raw({}, color)

    # -- predicates
    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not m for m in self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = AlgebraElement.constant(Fraction(other), self.color)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def generators(self) -> set:
        return {g for m in self.terms for g in m}

    def degree(self) -> int:
        """Largest total derivative grade sum(der) over monomials."""
        return max((sum(g.der for g in m) for m in self.terms), default=-1)

    def poly_degree(self) -> int:
        return max((len(m) for m in self.terms), default=-1)

    # -- arithmetic
    def _color_with(self, other: "AlgebraElement"):
        a, b = self.color, other.color
        if a is b or a == b:
            return a
        if a is None and self.is_constant():
            return b
        if b is None and other.is_constant():
            return a
        raise ColorTableMismatch("operands carry different color tables")

    def __add__(self, other):
        if not isinstance(other, AlgebraElement):
            if isinstance(other, (int, Fraction)) or hasattr(other, "d_dv"):
                other = AlgebraElement.constant(other, self.color)
            else:
                return NotImplemented
        color = self._color_with(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            s = out.get(m)
            s = c if s is None else s + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return AlgebraElement._raw(out, color)

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement._raw({m: -c for m, c in self.terms.items()}, self.color)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        if not s:
            return AlgebraElement._raw({}, self.color)
        out = {}
        for m, c in self.terms.items():
            x = c * s
            if x:
                out[m] = x
        return AlgebraElement._raw(out, self.color)

    def __mul__(self, other):
        if not isinstance(other, AlgebraElement):
            return self.scale(other)
        color = self._color_with(other)
        out: Dict[Monomial, object] = {}
        plain = color is None or color.trivial
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                if plain:
                    key = tuple(sorted(m1 + m2)) if m1 and m2 else (m1 or m2)
                    c = c1 * c2
                else:
                    key = tuple(sorted(m1 + m2))
                    f = _merge_factor(m1, m2, color)
                    c = c1 * c2 if f == 1 else c1 * c2 * f
                s = out.get(key)
                s = c if s is None else s + c
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return AlgebraElement._raw(out, color)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, k: int):
        out = AlgebraElement.constant(Fraction(1), self.color)
        for _ in range(k):
            out = out * self
        return out

    def map_coeffs(self, fn: Callable) -> "AlgebraElement":
        out = {}
        for m, c in self.terms.items():
            x = fn(c)
            if x:
                out[m] = x
        return AlgebraElement._raw(out, self.color)

    def with_color(self, color: Optional[ColorTable]) -> "AlgebraElement":
        """Reinterpret the (already sorted) monomials in another algebra."""
        return AlgebraElement._raw(dict(self.terms), color)

    # -- derivations
    def d_dv(self) -> "AlgebraElement":
        """d/dv: raises the derivative order of one factor at a time (Leibniz)."""
        out = AlgebraElement._raw({}, self.color)
        acc: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            for t, g in enumerate(m):
                if g.site >= 0:
                    continue  # specialised site generators do not depend on v
                if t > 0 and m[t - 1] == g:
                    continue  # handled together with the first copy
                mult = sum(1 for h in m if h == g)
                seq = m[:t] + (g.shifted(),) + m[t + 1:]
                key, f = _normal_order(seq, self.color)
                x = c * (f * mult)
                s = acc.get(key)
                s = x if s is None else s + x
                if s:
                    acc[key] = s
                else:
                    acc.pop(key, None)
        out.terms = acc
        return out

    def partial(self, g: Gen) -> "AlgebraElement":
        """Partial derivative in a commutative algebra."""
        if self.color is not None and not self.color.trivial:
            raise ValueError("partial derivatives are defined for commutative elements only")
        out: Dict[Monomial, object] = {}
        for m, c in self.terms.items():
            k = m.count(g)
            if k:
                t = m.index(g)
                key = m[:t] + m[t + 1:]
                x = c * k
                s = out.get(key)
                s = x if s is None else s + x
                if s:
                    out[key] = s
                else:
                    out.pop(key, None)
        return AlgebraElement._raw(out, self.color)

    def substitute(self, mapping: Callable[[Gen], Optional["AlgebraElement"]],
                   color: Optional[ColorTable] = None) -> "AlgebraElement":
        """Algebra map sending each generator g to ``mapping(g)`` (None keeps g).

        Factors are multiplied in the stored monomial order.
        """
        color = self.color if color is None else color
        out = AlgebraElement._raw({}, color)
        cache: Dict[Gen, AlgebraElement] = {}
        for m, c in self.terms.items():
            term = AlgebraElement.constant(c, color)
            for g in m:
                img = cache.get(g)
                if img is None:
                    img = mapping(g)
                    if img is None:
                        img = AlgebraElement.generator(g, color)
                    cache[g] = img
                term = term * img
            out = out + term
        return out

    # -- io
    def __repr__(self):
        return f"AlgebraElement({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms):
            c = self.terms[m]
            mono = "*".join(_mono_str(m))
            cs = str(c)
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif cs == "-1":
                parts.append("-" + mono)
            else:
                if not isinstance(c, Fraction) or "/" in cs and not cs.startswith("("):
                    cs = f"({cs})"
                parts.append(f"{cs}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> List[dict]:
        return [{"monomial": [g.to_json() for g in m], "coeff": str(self.terms[m])}
                for m in sorted(self.terms)]

    @classmethod
    def from_json(cls, data, color: Optional[ColorTable] = None) -> "AlgebraElement":
        if isinstance(data, str):
            data = json.loads(data)
        return cls({tuple(Gen.from_json(g) for g in t["monomial"]): Fraction(t["coeff"])
                    for t in data}, color)


def _mono_str(m: Monomial) -> List[str]:
    out = []
    for g, grp in itertools.groupby(m):
        k = len(list(grp))
        out.append(str(g) if k == 1 else f"{g}^{k}")
    return out


def generator_matrix(n: int, der: int = 0, site: int = SITE_V,
                     color: Optional[ColorTable] = None) -> "MatrixOverAlgebra":
    """The n x n matrix L^(der) with entries l_i^j^(der) at ``site``."""
    return MatrixOverAlgebra(n, 1, [[AlgebraElement.generator(Gen(site, der, i, j), color)
                                     for j in range(n)] for i in range(n)], color)


# ---------------------------------------------------------------------------
# matrices over the algebra (possibly acting on several tensor legs)
# ---------------------------------------------------------------------------

class MatrixOverAlgebra:
    """Operator on V^{(x)legs} with entries in the algebra.

    Products are ``odot`` products: ordinary matrix products in which entry
    products keep the factor order left-then-right.
    """

    __slots__ = ("dim", "legs", "rows", "color")

    def __init__(self, dim: int, legs: int, rows: Sequence[Sequence[AlgebraElement]],
                 color: Optional[ColorTable] = None):
        size = dim ** legs
        if len(rows) != size or any(len(r) != size for r in rows):
            raise ValueError(f"need a {size}x{size} array of entries")
        self.dim, self.legs, self.color = dim, legs, color
        self.rows = [list(r) for r in rows]

    @property
    def size(self) -> int:
        return self.dim ** self.legs

    @classmethod
    def zero(cls, dim, legs=1, color=None):
        s = dim ** legs
        return cls(dim, legs, [[AlgebraElement.zero(color) for _ in range(s)] for _ in range(s)], color)

    @classmethod
    def from_scalar(cls, op: LegOperator, color=None) -> "MatrixOverAlgebra":
        return cls(op.dim, op.legs, [[AlgebraElement.constant(x, color) for x in row]
                                     for row in op.entries], color)

    def __getitem__(self, idx):
        i, j = idx
        return self.rows[i][j]

    def _check(self, other):
        if (self.dim, self.legs) != (other.dim, other.legs):
            raise ValueError("matrix shapes differ")

    def __add__(self, other):
        self._check(other)
        return MatrixOverAlgebra(self.dim, self.legs,
                                 [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
                                 self.color)

    def __sub__(self, other):
        self._check(other)
        return MatrixOverAlgebra(self.dim, self.legs,
                                 [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)],
                                 self.color)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, s):
        return MatrixOverAlgebra(self.dim, self.legs, [[a.scale(s) for a in r] for r in self.rows],
                                 self.color)

    def odot(self, other: "MatrixOverAlgebra") -> "MatrixOverAlgebra":
        self._check(other)
        s = self.size
        out = []
        for i in range(s):
            row = []
            for j in range(s):
                acc = AlgebraElement.zero(self.color)
                for k in range(s):
                    a = self.rows[i][k]
                    if a:
                        b = other.rows[k][j]
                        if b:
                            acc = acc + a * b
                row.append(acc)
            out.append(row)
        return MatrixOverAlgebra(self.dim, self.legs, out, self.color)

    def __matmul__(self, other):
        if isinstance(other, LegOperator):
            return self.rmul_scalar(other)
        return self.odot(other)

    def __rmatmul__(self, other):
        if isinstance(other, LegOperator):
            return self.lmul_scalar(other)
        return NotImplemented

    def lmul_scalar(self, op: LegOperator) -> "MatrixOverAlgebra":
        """op . self"""
        s = self.size
        out = []
        for i in range(s):
            prow = op.entries[i]
            row = []
            for j in range(s):
                acc = AlgebraElement.zero(self.color)
                for k in range(s):
                    x = prow[k]
                    if x:
                        e = self.rows[k][j]
                        if e:
                            acc = acc + e.scale(x)
                row.append(acc)
            out.append(row)
        return MatrixOverAlgebra(self.dim, self.legs, out, self.color)

    def rmul_scalar(self, op: LegOperator) -> "MatrixOverAlgebra":
        """self . op"""
        s = self.size
        cols = list(zip(*op.entries))
        out = []
        for i in range(s):
            row = []
            for j in range(s):
                acc = AlgebraElement.zero(self.color)
                for k, x in enumerate(cols[j]):
                    if x:
                        e = self.rows[i][k]
                        if e:
                            acc = acc + e.scale(x)
                row.append(acc)
            out.append(row)
        return MatrixOverAlgebra(self.dim, self.legs, out, self.color)

    def power(self, k: int) -> "MatrixOverAlgebra":
        out = MatrixOverAlgebra.from_scalar(LegOperator.identity(self.dim, self.legs), self.color)
        for _ in range(k):
            out = out.odot(self)
        return out

    def trace(self) -> AlgebraElement:
        acc = AlgebraElement.zero(self.color)
        for i in range(self.size):
            acc = acc + self.rows[i][i]
        return acc

    def map(self, fn: Callable[[AlgebraElement], AlgebraElement]) -> "MatrixOverAlgebra":
        return MatrixOverAlgebra(self.dim, self.legs, [[fn(a) for a in r] for r in self.rows], self.color)

    def d_dv(self) -> "MatrixOverAlgebra":
        return self.map(lambda a: a.d_dv())

    def tensor_identity(self, extra: int) -> "MatrixOverAlgebra":
        """self (x) I on ``extra`` further legs."""
        n = self.dim
        k = n ** extra
        s = self.size * k
        z = AlgebraElement.zero(self.color)
        rows = [[z] * s for _ in range(s)]
        for i in range(self.size):
            for j in range(self.size):
                e = self.rows[i][j]
                if e:
                    for t in range(k):
                        rows[i * k + t][j * k + t] = e
        return MatrixOverAlgebra(n, self.legs + extra, rows, self.color)

    def __eq__(self, other):
        if not isinstance(other, MatrixOverAlgebra):
            return NotImplemented
        return (self.dim, self.legs) == (other.dim, other.legs) and all(
            a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb))

    def is_zero(self) -> bool:
        return not any(a for r in self.rows for a in r)

    def first_nonzero(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if a:
                    return (i, j), a
        return None

    def __str__(self):
        return "\n".join("[" + ", ".join(str(a) for a in r) + "]" for r in self.rows)


def mat_odot(a: MatrixOverAlgebra, b: MatrixOverAlgebra) -> MatrixOverAlgebra:
    if a.color != b.color:
        raise ColorTableMismatch("matrices live in algebras with different color tables")
    return a.odot(b)


def bar_embed(L: MatrixOverAlgebra, position: int, total: int, R: LegOperator,
              R_inv: Optional[LegOperator] = None) -> MatrixOverAlgebra:
    """L_{bar 1} = L (x) I, L_{bar(i+1)} = R_{i,i+1} L_{bar i} R_{i,i+1}^{-1}."""
    if not 1 <= position <= total:
        raise ValueError(f"position {position} out of range 1..{total}")
    if L.legs != 1:
        raise ValueError("bar_embed takes an n x n matrix")
    R_inv = R.inverse() if R_inv is None else R_inv
    out = L.tensor_identity(total - 1)
    for i in range(1, position):
        Ri = embed_leg(R, i, total)
        Ri_inv = embed_leg(R_inv, i, total)
        out = out.lmul_scalar(Ri).rmul_scalar(Ri_inv)
    return out


def trace_product(a: MatrixOverAlgebra, b: MatrixOverAlgebra, weight: Optional[Matrix] = None) -> AlgebraElement:
    """Tr(W . a . b) without forming the full product (W defaults to the identity)."""
    n = a.size
    acc = AlgebraElement.zero(a.color)
    for i in range(n):
        for j in range(n):
            w = (1 if i == j else 0) if weight is None else weight[i][j]
            if not w:
                continue
            for k in range(n):
                x, y = a.rows[j][k], b.rows[k][i]
                if x and y:
                    acc = acc + (x * y).scale(w)
    return acc
