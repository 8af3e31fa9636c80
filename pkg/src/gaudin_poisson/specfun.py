"""Exact rational functions of the spectral parameters u and v.

Polynomials are sparse maps ``{(deg_u, deg_v): Fraction}``.  A
:class:`RationalFunction` is kept canonical: numerator and denominator are
coprime and the denominator is monic with respect to lex order on
``(deg_v, deg_u)``.  Equality is therefore syntactic.

Plain-text grammar (``parse`` / ``str``): integers, rationals ``p/q``, the
names ``u`` and ``v``, ``+ - * /``, parentheses and integer powers written
``^`` (``**`` also accepted), e.g. ``1/((3-v)^2)``.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Tuple, Union

Exp = Tuple[int, int]


class NonRationalPrimitive(ValueError):
    """The v-primitive has a logarithmic part (a simple pole survives)."""


class Poly2:
    """Sparse polynomial in u, v over the rationals."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[Exp, Fraction]] = None):
        self.terms: Dict[Exp, Fraction] = {}
        if terms:
            for e, c in terms.items():
                if c:
                    self.terms[e] = Fraction(c)

    # -- constructors
    @classmethod
    def const(cls, c) -> "Poly2":
        return cls({(0, 0): Fraction(c)})

    @classmethod
    def u(cls) -> "Poly2":
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def v(cls) -> "Poly2":
        return cls({(0, 1): Fraction(1)})

    @classmethod
    def _raw(cls, terms):
        p = cls.__new__(cls)
        p.terms = terms
        return p

    # -- predicates / access
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Poly2.const(other)
        return isinstance(other, Poly2) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_const(self) -> bool:
        return all(e == (0, 0) for e in self.terms)

    def const_value(self) -> Fraction:
        return self.terms.get((0, 0), Fraction(0))

    def deg_v(self) -> int:
        return max((e[1] for e in self.terms), default=-1)

    def deg_u(self) -> int:
        return max((e[0] for e in self.terms), default=-1)

    def lead(self) -> Tuple[Exp, Fraction]:
        e = max(self.terms, key=lambda t: (t[1], t[0]))
        return e, self.terms[e]

    # -- arithmetic
    def __add__(self, other):
        other = _poly(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Poly2._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly2._raw({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_poly(other))

    def __rsub__(self, other):
        return _poly(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly2()
            return Poly2._raw({e: c * other for e, c in self.terms.items()})
        other = _poly(other)
        out: Dict[Exp, Fraction] = {}
        for (a, b), c in self.terms.items():
            for (x, y), d in other.terms.items():
                e = (a + x, b + y)
                s = out.get(e, 0) + c * d
                if s:
                    out[e] = s
                else:
                    out.pop(e, None)
        return Poly2._raw(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly2.const(1)
        for _ in range(k):
            out = out * self
        return out

    def d_dv(self) -> "Poly2":
        return Poly2({(a, b - 1): c * b for (a, b), c in self.terms.items() if b})

    def d_du(self) -> "Poly2":
        return Poly2({(a - 1, b): c * a for (a, b), c in self.terms.items() if a})

    def coeffs_v(self) -> Dict[int, "Poly2"]:
        """Coefficients as a polynomial in v with coefficients in Q[u]."""
        out: Dict[int, Dict[Exp, Fraction]] = {}
        for (a, b), c in self.terms.items():
            out.setdefault(b, {})[(a, 0)] = c
        return {b: Poly2._raw(t) for b, t in out.items()}

    def divmod_lex(self, other: "Poly2") -> Tuple["Poly2", "Poly2"]:
        """Multivariate division by one polynomial, lex order v > u."""
        if not other:
            raise ZeroDivisionError("polynomial division by zero")
        (lu, lv), lc = other.lead()
        q = Poly2()
        r = Poly2(self.terms)
        rem = Poly2()
        while r:
            (a, b), c = r.lead()
            if a >= lu and b >= lv:
                t = Poly2._raw({(a - lu, b - lv): c / lc})
                q = q + t
                r = r - t * other
            else:
                rem = rem + Poly2._raw({(a, b): c})
                r = Poly2._raw({e: x for e, x in r.terms.items() if e != (a, b)})
        return q, rem

    def exact_div(self, other: "Poly2") -> "Poly2":
        q, rem = self.divmod_lex(other)
        if rem:
            raise ArithmeticError("division is not exact")
        return q

    def monic(self) -> "Poly2":
        if not self:
            return self
        return self * (1 / self.lead()[1])

    def evaluate(self, u=None, v=None):
        """Substitute values (numbers, Poly2 or RationalFunction) for u and/or v."""
        U = Poly2.u() if u is None else u
        V = Poly2.v() if v is None else v
        out = Fraction(0)
        for (a, b), c in self.terms.items():
            out = out + c * _power(U, a) * _power(V, b)
        return out

    def __repr__(self):
        return f"Poly2({self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for (a, b), c in sorted(self.terms.items(), key=lambda t: (-t[0][1], -t[0][0])):
            mono = []
            if a:
                mono.append("u" if a == 1 else f"u^{a}")
            if b:
                mono.append("v" if b == 1 else f"v^{b}")
            if not mono:
                parts.append(_fmt(c))
            elif c == 1:
                parts.append("*".join(mono))
            elif c == -1:
                parts.append("-" + "*".join(mono))
            else:
                parts.append(_fmt(c) + "*" + "*".join(mono))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


def _fmt(c: Fraction) -> str:
    return str(c) if c.denominator == 1 else f"({c})"


def _power(x, k):
    out = 1
    for _ in range(k):
        out = out * x
    return out


def _poly(x) -> Poly2:
    if isinstance(x, Poly2):
        return x
    if isinstance(x, (int, Fraction)):
        return Poly2.const(x)
    raise TypeError(f"expected a polynomial, got {type(x).__name__}")


# ---------------------------------------------------------------------------
# gcd: content / primitive part recursion over Q[u][v]
# ---------------------------------------------------------------------------

def _gcd_u(a: Poly2, b: Poly2) -> Poly2:
    """Monic gcd of two polynomials in u alone (Euclid over Q)."""
    while b:
        a, b = b, a.divmod_lex(b)[1]
    return a.monic() if a else a


def content_v(p: Poly2) -> Poly2:
    g = Poly2()
    for c in p.coeffs_v().values():
        g = _gcd_u(g, c) if g else c.monic()
        if g.is_const():
            return Poly2.const(1)
    return g


def _prem_v(a: Poly2, b: Poly2) -> Poly2:
    """Pseudo-remainder of a by b as polynomials in v over Q[u]."""
    db = b.deg_v()
    lcb = b.coeffs_v()[db]
    r = a
    while r and r.deg_v() >= db:
        dr = r.deg_v()
        lcr = r.coeffs_v()[dr]
        r = lcb * r - lcr * Poly2._raw({(0, dr - db): Fraction(1)}) * b
    return r


def gcd(a: Poly2, b: Poly2) -> Poly2:
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    ca, cb = content_v(a), content_v(b)
    g_cont = _gcd_u(ca, cb)
    pa, pb = a.exact_div(ca), b.exact_div(cb)
    if pa.deg_v() < pb.deg_v():
        pa, pb = pb, pa
    while pb and pb.deg_v() > 0:
        r = _prem_v(pa, pb)
        pa = pb
        pb = r.exact_div(content_v(r)) if r else r
    if pb:  # nonzero constant in v: primitive parts are coprime
        return g_cont.monic()
    return (g_cont * pa.exact_div(content_v(pa))).monic()


# ---------------------------------------------------------------------------
# rational functions
# ---------------------------------------------------------------------------

class RationalFunction:
    """Canonical exact element of Q(u, v)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _canonical=False):
        num = _poly(num)
        den = Poly2.const(1) if den is None else _poly(den)
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        if _canonical:
            self.num, self.den = num, den
            return
        if not num:
            self.num, self.den = Poly2(), Poly2.const(1)
            return
        if not den.is_const():
            g = gcd(num, den)
            if not g.is_const():
                num, den = num.exact_div(g), den.exact_div(g)
        lc = den.lead()[1]
        if lc != 1:
            num, den = num * (1 / lc), den * (1 / lc)
        self.num, self.den = num, den

    @classmethod
    def u(cls):
        return cls(Poly2.u())

    @classmethod
    def v(cls):
        return cls(Poly2.v())

    @classmethod
    def const(cls, c):
        return cls(Poly2.const(c), _canonical=True) if c else cls(Poly2())

    def __bool__(self):
        return bool(self.num)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly2)):
            other = RationalFunction(other)
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    def __add__(self, other):
        o = _rf(other)
        if o is None:
            return NotImplemented
        if not o.num:
            return self
        if not self.num:
            return o
        if self.den == o.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __sub__(self, other):
        o = _rf(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return _rf(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return RationalFunction(Poly2())
            return RationalFunction(self.num * other, self.den, _canonical=True)
        o = _rf(other)
        if o is None:
            return NotImplemented
        if not o.num or not self.num:
            return RationalFunction(Poly2())
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = _rf(other)
        if o is None:
            return NotImplemented
        if not o:
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return _rf(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RationalFunction(1) / self ** (-k)
        return RationalFunction(self.num ** k, self.den ** k)

    def d_dv(self) -> "RationalFunction":
        return RationalFunction(self.num.d_dv() * self.den - self.num * self.den.d_dv(),
                                self.den * self.den)

    def d_du(self) -> "RationalFunction":
        return RationalFunction(self.num.d_du() * self.den - self.num * self.den.d_du(),
                                self.den * self.den)

    def eval_at(self, u=None, v=None):
        """Substitute u and/or v (numbers or rational functions)."""
        u = _as_value(u)
        v = _as_value(v)
        n = self.num.evaluate(u, v)
        d = self.den.evaluate(u, v)
        if isinstance(n, (int, Fraction)) and isinstance(d, (int, Fraction)):
            if not d:
                raise ZeroDivisionError("evaluation hits a pole")
            return Fraction(n) / Fraction(d)
        return _rf(n) / _rf(d)

    def v_to_u(self) -> "RationalFunction":
        """The same function of u (v renamed to u); requires no u dependence."""
        if self.num.deg_u() > 0 or self.den.deg_u() > 0:
            raise ValueError("v_to_u needs a function of v alone")
        swap = lambda p: Poly2({(b, a): c for (a, b), c in p.terms.items()})
        return RationalFunction(swap(self.num), swap(self.den))

    def is_polynomial(self) -> bool:
        return self.den.is_const()

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"

    def __str__(self):
        if self.den.is_const():
            return str(self.num)
        return f"({self.num})/({self.den})"

    def to_json(self) -> str:
        return str(self)


def _as_value(x):
    if x is None or isinstance(x, (Poly2, RationalFunction)):
        return x
    return Fraction(x)


def _rf(x) -> Optional[RationalFunction]:
    if isinstance(x, RationalFunction):
        return x
    if isinstance(x, (int, Fraction)):
        return RationalFunction.const(Fraction(x))
    if isinstance(x, Poly2):
        return RationalFunction(x)
    return None


U = RationalFunction.u()
V = RationalFunction.v()


def pole_factor(pole, power: int = 1, var: str = "v") -> RationalFunction:
    """1 / (pole - var)^power."""
    x = U if var == "u" else V
    return RationalFunction(1) / (RationalFunction.const(Fraction(pole)) - x) ** power


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

def parse(text: str, constants: Optional[Dict[str, Fraction]] = None) -> RationalFunction:
    """Read e.g. "1/((v1-v)^2)"; names other than u and v come from ``constants``."""
    tree = ast.parse(text.replace("^", "**"), mode="eval")
    consts = {k: Fraction(x) for k, x in (constants or {}).items()}
    return _rf(_eval_node(tree.body, consts))


def _eval_node(node, consts):
    if isinstance(node, ast.Constant) and isinstance(node.value, int):
        return Fraction(node.value)
    if isinstance(node, ast.Name):
        if node.id == "u":
            return U
        if node.id == "v":
            return V
        if node.id in consts:
            return consts[node.id]
        raise ValueError(f"unknown symbol {node.id!r}")
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        x = _eval_node(node.operand, consts)
        return -x if isinstance(node.op, ast.USub) else x
    if isinstance(node, ast.BinOp):
        a, b = _eval_node(node.left, consts), _eval_node(node.right, consts)
        if isinstance(node.op, ast.Add):
            return a + b
        if isinstance(node.op, ast.Sub):
            return a - b
        if isinstance(node.op, ast.Mult):
            return a * b
        if isinstance(node.op, ast.Div):
            if isinstance(a, Fraction) and isinstance(b, Fraction):
                return a / b
            return _rf(a) / _rf(b)
        if isinstance(node.op, ast.Pow):
            if not (isinstance(b, Fraction) and b.denominator == 1):
                raise ValueError("exponents must be integers")
            return a ** int(b)
    raise ValueError(f"unsupported expression: {ast.dump(node)}")


# ---------------------------------------------------------------------------
# antiderivative in v (Horowitz-Ostrogradsky)
# ---------------------------------------------------------------------------

def _univariate_v(p: Poly2) -> List[Fraction]:
    out = [Fraction(0)] * (p.deg_v() + 1)
    for (a, b), c in p.terms.items():
        if a:
            raise ValueError("expected a polynomial in v alone")
        out[b] = c
    return out


def _from_v(coeffs: Iterable[Fraction]) -> Poly2:
    return Poly2({(0, i): c for i, c in enumerate(coeffs)})


def _integrate_poly_v(p: Poly2) -> Poly2:
    return Poly2({(a, b + 1): c / (b + 1) for (a, b), c in p.terms.items()})


def _ho_reduce(num: Poly2, den: Poly2) -> "RationalFunction":
    """A/D1 with (A/D1)' = num/den, D1 = gcd(den, den'); raises on a log part."""
    from .tensorops import solve_overdetermined

    d1 = gcd(den, den.d_dv())
    d2 = den.exact_div(d1)
    h = (d2 * d1.d_dv()).exact_div(d1)
    m, k = d1.deg_v(), d2.deg_v()
    N = den.deg_v()
    # unknowns: a_0..a_{m-1}, b_0..b_{k-1};  num = A' d2 - A h + B d1
    cols = []
    for i in range(m):
        a = Poly2({(0, i): Fraction(1)})
        cols.append(_univariate_v(a.d_dv() * d2 - a * h))
    for i in range(k):
        b = Poly2({(0, i): Fraction(1)})
        cols.append(_univariate_v(b * d1))
    rows = [[(c[j] if j < len(c) else Fraction(0)) for c in cols] for j in range(N)]
    rhs = _univariate_v(num) + [Fraction(0)] * N
    sol = solve_overdetermined(rows, rhs[:N])
    a_coef, b_coef = sol[:m], sol[m:]
    if any(b_coef):
        raise NonRationalPrimitive(
            f"primitive of ({num})/({den}) has a logarithmic part ({_from_v(b_coef)})/({d2})")
    return RationalFunction(_from_v(a_coef), d1)


def antiderivative_v(f: RationalFunction) -> RationalFunction:
    """Rational F with dF/dv = f and zero integration constant.

    The denominator of ``f`` must not involve u (u enters the numerator
    polynomially).  Convention: the polynomial part of F has no constant term
    and the remaining part is a proper fraction.
    """
    if f.den.deg_u() > 0:
        raise ValueError("antiderivative_v needs a denominator free of u")
    den = f.den
    out = RationalFunction(0)
    # split the numerator by powers of u; each slice is a univariate problem
    by_u: Dict[int, Dict[Exp, Fraction]] = {}
    for (a, b), c in f.num.terms.items():
        by_u.setdefault(a, {})[(0, b)] = c
    for a, terms in sorted(by_u.items()):
        q, r = Poly2(terms).divmod_lex(den)
        part = RationalFunction(_integrate_poly_v(q))
        if r:
            part = part + _ho_reduce(r, den)
        out = out + part * RationalFunction(Poly2({(a, 0): Fraction(1)}))
    return out
