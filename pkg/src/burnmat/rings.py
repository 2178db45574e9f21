"""Exact arithmetic in Z[x,x^-1,y,y^-1,t,t^-1] and in the truncated quotient by Sigma^D.

Sigma is the augmentation ideal of R = Z[x,x^-1,y,y^-1], generated by a = 1-x and
b = 1-y.  R/Sigma^D is represented on the monomial basis a^r b^s (r+s < D) in
graded-lex order, as a plain integer vector of dimension D(D+1)/2.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterable, Mapping


class LaurentPoly:
    """Sparse Laurent polynomial: exponent triple (i,j,k) of x^i y^j t^k -> int coeff."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[tuple[int, int, int], int] | None = None):
        self.terms: dict[tuple[int, int, int], int] = {}
        if terms:
            for m, c in terms.items():
                if c:
                    self.terms[m] = c

    @staticmethod
    def zero() -> "LaurentPoly":
        return LaurentPoly()

    @staticmethod
    def const(c: int) -> "LaurentPoly":
        return LaurentPoly({(0, 0, 0): c})

    @staticmethod
    def monomial(c: int, i: int = 0, j: int = 0, k: int = 0) -> "LaurentPoly":
        return LaurentPoly({(i, j, k): c})

    @staticmethod
    def var_x() -> "LaurentPoly":
        return LaurentPoly.monomial(1, i=1)

    @staticmethod
    def var_y() -> "LaurentPoly":
        return LaurentPoly.monomial(1, j=1)

    @staticmethod
    def var_t() -> "LaurentPoly":
        return LaurentPoly.monomial(1, k=1)

    @property
    def has_t(self) -> bool:
        return any(k for (_, _, k) in self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def is_one(self) -> bool:
        return self.terms == {(0, 0, 0): 1}

    def const_value(self) -> int:
        """The value of a constant polynomial; rejects non-constants."""
        if not self.terms:
            return 0
        if set(self.terms) != {(0, 0, 0)}:
            raise ValueError("not a constant polynomial")
        return self.terms[(0, 0, 0)]

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __neg__(self) -> "LaurentPoly":
        out = LaurentPoly()
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __add__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        res = LaurentPoly()
        res.terms = out
        return res

    __radd__ = __add__

    def __sub__(self, other) -> "LaurentPoly":
        return self + (-other if isinstance(other, LaurentPoly) else -LaurentPoly.const(other))

    def __rsub__(self, other) -> "LaurentPoly":
        return (-self) + other

    def __mul__(self, other) -> "LaurentPoly":
        if isinstance(other, int):
            other = LaurentPoly.const(other)
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        f, g = self.terms, other.terms
        if len(f) > len(g):
            f, g = g, f
        out: dict[tuple[int, int, int], int] = {}
        for (i1, j1, k1), c1 in f.items():
            for (i2, j2, k2), c2 in g.items():
                m = (i1 + i2, j1 + j2, k1 + k2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        res = LaurentPoly()
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "LaurentPoly":
        if n < 0:
            raise ValueError("negative powers only via explicit inverse monomials")
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def augmentation(self) -> int:
        """Evaluation at x = y = t = 1, i.e. the coefficient sum."""
        return sum(self.terms.values())

    def specialize(self, x: int | None = None, y: int | None = None,
                   t: int | None = None) -> "LaurentPoly":
        """Substitute integer values (+1 or -1) for some variables, keep the rest.

        Values restricted to units so negative exponents stay exact.
        """
        for name, v in (("x", x), ("y", y), ("t", t)):
            if v is not None and v not in (1, -1):
                raise ValueError(f"{name} must be +1 or -1, got {v}")
        out: dict[tuple[int, int, int], int] = {}
        for (i, j, k), c in self.terms.items():
            if x is not None:
                c *= x ** (i & 1) if x == -1 else 1
                i = 0
            if y is not None:
                c *= y ** (j & 1) if y == -1 else 1
                j = 0
            if t is not None:
                c *= t ** (k & 1) if t == -1 else 1
                k = 0
            m = (i, j, k)
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        res = LaurentPoly()
        res.terms = out
        return res

    def t_coefficients(self) -> dict[int, "LaurentPoly"]:
        """Split into {t-exponent: polynomial in x,y}."""
        out: dict[int, LaurentPoly] = {}
        for (i, j, k), c in self.terms.items():
            out.setdefault(k, LaurentPoly()).terms[(i, j, 0)] = c
        return out

    def t_shift(self, d: int) -> "LaurentPoly":
        out = LaurentPoly()
        out.terms = {(i, j, k + d): c for (i, j, k), c in self.terms.items()}
        return out

    def sigma_valuation(self) -> int | float:
        """Largest k with f in Sigma^k; math.inf for 0.  Rejects inputs containing t.

        Negative exponents are cleared by a unit monomial first; this is sound because
        x^m y^n = (1-a)^m (1-b)^n has constant term 1, so multiplying by it preserves
        the lowest-degree homogeneous part in (a,b).
        """
        if self.has_t:
            raise ValueError("sigma_valuation is defined on t-free polynomials")
        if not self.terms:
            return math.inf
        mi = min(i for (i, _, _) in self.terms)
        mj = min(j for (_, j, _) in self.terms)
        acc: dict[tuple[int, int], int] = {}
        for (i, j, _), c in self.terms.items():
            for r, cr in enumerate(_binom_row(i - mi)):
                for s, cs in enumerate(_binom_row(j - mj)):
                    m = (r, s)
                    v = acc.get(m, 0) + c * cr * cs
                    if v:
                        acc[m] = v
                    else:
                        acc.pop(m, None)
        return min(r + s for (r, s) in acc)

    def in_sigma_power(self, d: int) -> bool:
        """Membership f in Sigma^d without the full valuation: only the degree-<d
        part of the (a,b) expansion is computed, so this stays fast on inputs
        whose sigma_valuation would expand millions of binomial products."""
        if d <= 0:
            return True
        if self.has_t:
            raise ValueError("in_sigma_power is defined on t-free polynomials")
        if not self.terms:
            return True
        return not any(self.to_truncated(d).coeffs)

    def to_truncated(self, D: int) -> "TruncatedPoly":
        """Image in R/Sigma^D under x -> 1-a, y -> 1-b (geometric series for inverses)."""
        if self.has_t:
            raise ValueError("to_truncated is defined on t-free polynomials")
        coeffs = [0] * tri_dim(D)
        idx = _index_table(D)
        for (i, j, _), c in self.terms.items():
            row_x = xpow_coeffs(i, D)
            row_y = xpow_coeffs(j, D)
            for r, cr in enumerate(row_x):
                if not cr:
                    continue
                lim = D - r
                for s in range(min(lim, len(row_y))):
                    cs = row_y[s]
                    if cs:
                        coeffs[idx[(r, s)]] += c * cr * cs
        return TruncatedPoly(D, coeffs)

    def render(self) -> str:
        """Canonical text: terms sorted, c*x^i*y^j*t^k with ^1 elided."""
        if not self.terms:
            return "0"
        parts = []
        for (i, j, k) in sorted(self.terms):
            c = self.terms[(i, j, k)]
            factors = []
            for name, e in (("x", i), ("y", j), ("t", k)):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            parts.append((c < 0, body))
        out = []
        for n, (neg, body) in enumerate(parts):
            if n == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    __str__ = render

    def __repr__(self):
        return f"LaurentPoly({self.render()})"


ZERO = LaurentPoly.zero()
ONE = LaurentPoly.const(1)
X = LaurentPoly.var_x()
Y = LaurentPoly.var_y()
T = LaurentPoly.var_t()


class ExactDivisionError(ValueError):
    pass


def divide_one_minus(f: LaurentPoly, axis: int) -> LaurentPoly:
    """Exact division by 1-x (axis 0), 1-y (axis 1), or 1-t (axis 2).

    Negative exponents on the axis are cleared by a unit first, so divisibility
    is unit-invariant; per residual exponent pair the quotient is a prefix sum,
    and the full sum must vanish or the division is not exact.
    """
    if f.is_zero():
        return f
    shift = min(m[axis] for m in f.terms)
    rest_axes = tuple(ax for ax in range(3) if ax != axis)
    slices: dict[tuple[int, int], dict[int, int]] = {}
    for m, c in f.terms.items():
        rest = (m[rest_axes[0]], m[rest_axes[1]])
        slices.setdefault(rest, {})[m[axis] - shift] = c
    out: dict[tuple[int, int, int], int] = {}
    for rest, row in slices.items():
        top = max(row)
        acc = 0
        for e in range(top + 1):
            acc += row.get(e, 0)
            if e == top:
                if acc != 0:
                    raise ExactDivisionError("not divisible")
                break
            if acc:
                m = [0, 0, 0]
                m[axis] = e + shift
                m[rest_axes[0]], m[rest_axes[1]] = rest
                out[tuple(m)] = acc
    res = LaurentPoly()
    res.terms = out
    return res


def divide_by_t_minus_one(f: LaurentPoly) -> LaurentPoly:
    """Exact division by t-1 = -(1-t); raises ExactDivisionError unless f(t=1) = 0."""
    return -divide_one_minus(f, 2)


@lru_cache(maxsize=None)
def _binom_row(n: int) -> tuple[int, ...]:
    """Coefficients of (1-v)^n in v, n >= 0 (signs included)."""
    row = [1]
    for _ in range(n):
        nxt = [1]
        for a, b in zip(row, row[1:]):
            nxt.append(a + b)
        nxt.append(1)
        row = nxt
    return tuple(c if r % 2 == 0 else -c for r, c in enumerate(row))


@lru_cache(maxsize=None)
def xpow_coeffs(n: int, D: int) -> tuple[int, ...]:
    """Coefficients of the image of x^n in Z[a]/(a^D), a = 1-x.

    n >= 0: (1-a)^n, i.e. (-1)^r C(n,r).  n < 0: geometric series power,
    C(-n-1+r, r), which is exact because (1-a) * sum a^r = 1 mod a^D.
    """
    if n >= 0:
        row = _binom_row(n)
        return row[:D] + (0,) * max(0, D - len(row))
    m = -n
    return tuple(math.comb(m - 1 + r, r) for r in range(D))


@lru_cache(maxsize=None)
def tri_dim(D: int) -> int:
    return D * (D + 1) // 2


@lru_cache(maxsize=None)
def _index_table(D: int) -> dict[tuple[int, int], int]:
    """(r,s) -> graded-lex position: degree ascending, r ascending within a degree."""
    table = {}
    for d in range(D):
        for r in range(d + 1):
            table[(r, d - r)] = len(table)
    return table


@lru_cache(maxsize=None)
def monomial_list(D: int) -> tuple[tuple[int, int], ...]:
    return tuple(sorted(_index_table(D), key=_index_table(D).get))


class TruncatedPoly:
    """Element of R/Sigma^D: integer vector on the a^r b^s basis, r+s < D."""

    __slots__ = ("D", "coeffs")

    def __init__(self, D: int, coeffs: Iterable[int]):
        self.D = D
        self.coeffs = tuple(coeffs)
        if len(self.coeffs) != tri_dim(D):
            raise ValueError(f"need {tri_dim(D)} coefficients for D={D}")

    @staticmethod
    def zero(D: int) -> "TruncatedPoly":
        return TruncatedPoly(D, [0] * tri_dim(D))

    @staticmethod
    def one(D: int) -> "TruncatedPoly":
        c = [0] * tri_dim(D)
        c[0] = 1
        return TruncatedPoly(D, c)

    @staticmethod
    def basis_monomial(D: int, r: int, s: int, c: int = 1) -> "TruncatedPoly":
        v = [0] * tri_dim(D)
        v[_index_table(D)[(r, s)]] = c
        return TruncatedPoly(D, v)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def augmentation(self) -> int:
        return self.coeffs[0]

    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedPoly):
            return NotImplemented
        return self.D == other.D and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.D, self.coeffs))

    def __neg__(self) -> "TruncatedPoly":
        return TruncatedPoly(self.D, [-c for c in self.coeffs])

    def _check(self, other: "TruncatedPoly"):
        if self.D != other.D:
            raise ValueError(f"truncation mismatch: {self.D} vs {other.D}")

    def __add__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._check(other)
        return TruncatedPoly(self.D, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: "TruncatedPoly") -> "TruncatedPoly":
        self._check(other)
        return TruncatedPoly(self.D, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __mul__(self, other) -> "TruncatedPoly":
        if isinstance(other, int):
            return TruncatedPoly(self.D, [other * c for c in self.coeffs])
        self._check(other)
        D = self.D
        monos = monomial_list(D)
        idx = _index_table(D)
        out = [0] * tri_dim(D)
        for m1, c1 in enumerate(self.coeffs):
            if not c1:
                continue
            r1, s1 = monos[m1]
            for m2, c2 in enumerate(other.coeffs):
                if not c2:
                    continue
                r2, s2 = monos[m2]
                if r1 + r2 + s1 + s2 < D:
                    out[idx[(r1 + r2, s1 + s2)]] += c1 * c2
        return TruncatedPoly(D, out)

    __rmul__ = __mul__

    def min_degree(self) -> int | float:
        """Lowest total degree with a nonzero coefficient; inf when zero."""
        monos = monomial_list(self.D)
        degs = [r + s for m, (r, s) in enumerate(monos) if self.coeffs[m]]
        return min(degs) if degs else math.inf

    def render(self) -> str:
        if self.is_zero():
            return "0"
        parts = []
        for m, (r, s) in enumerate(monomial_list(self.D)):
            c = self.coeffs[m]
            if not c:
                continue
            factors = []
            for name, e in (("a", r), ("b", s)):
                if e == 1:
                    factors.append(name)
                elif e:
                    factors.append(f"{name}^{e}")
            if not factors:
                body = str(abs(c))
            elif abs(c) == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(abs(c))] + factors)
            parts.append((c < 0, body))
        out = []
        for n, (neg, body) in enumerate(parts):
            if n == 0:
                out.append(("-" if neg else "") + body)
            else:
                out.append((" - " if neg else " + ") + body)
        return "".join(out)

    __str__ = render

    def __repr__(self):
        return f"TruncatedPoly(D={self.D}, {self.render()})"


class UnitMonomial:
    """A signed unit monomial +-x^i y^j t^k; group elements always have sign +1."""

    __slots__ = ("sign", "i", "j", "k")

    def __init__(self, sign: int, i: int, j: int, k: int = 0):
        if sign not in (1, -1):
            raise ValueError("sign must be +-1")
        self.sign, self.i, self.j, self.k = sign, i, j, k

    @staticmethod
    def from_poly(f: LaurentPoly) -> "UnitMonomial":
        if len(f.terms) != 1:
            raise ValueError(f"not a unit monomial: {f.render()}")
        ((i, j, k), c), = f.terms.items()
        if c not in (1, -1):
            raise ValueError(f"not a unit monomial: {f.render()}")
        return UnitMonomial(c, i, j, k)

    @property
    def is_positive(self) -> bool:
        return self.sign == 1

    def as_poly(self) -> LaurentPoly:
        return LaurentPoly.monomial(self.sign, self.i, self.j, self.k)

    def inverse(self) -> "UnitMonomial":
        return UnitMonomial(self.sign, -self.i, -self.j, -self.k)

    def __mul__(self, other: "UnitMonomial") -> "UnitMonomial":
        return UnitMonomial(self.sign * other.sign, self.i + other.i,
                            self.j + other.j, self.k + other.k)

    def __eq__(self, other) -> bool:
        if not isinstance(other, UnitMonomial):
            return NotImplemented
        return (self.sign, self.i, self.j, self.k) == (other.sign, other.i, other.j, other.k)

    def __hash__(self):
        return hash((self.sign, self.i, self.j, self.k))

    def __repr__(self):
        return f"UnitMonomial({self.as_poly().render()})"


class PolyParseError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


class _Parser:
    """Recursive descent for the CLI syntax: + - * ^ ( ), vars x y t, int exponents."""

    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def _skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def _peek(self) -> str:
        self._skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> LaurentPoly:
        out = self._expr()
        self._skip()
        if self.pos != len(self.text):
            raise PolyParseError(f"unexpected {self.text[self.pos]!r}", self.pos)
        return out

    def _expr(self) -> LaurentPoly:
        ch = self._peek()
        neg = False
        if ch in ("+", "-"):
            self.pos += 1
            neg = ch == "-"
        out = self._term()
        if neg:
            out = -out
        while self._peek() in ("+", "-"):
            op = self._peek()
            self.pos += 1
            rhs = self._term()
            out = out - rhs if op == "-" else out + rhs
        return out

    def _term(self) -> LaurentPoly:
        out = self._factor()
        while True:
            ch = self._peek()
            if ch == "*":
                self.pos += 1
                out = out * self._factor()
            elif ch and (ch.isdigit() or ch in "xyt("):
                out = out * self._factor()
            else:
                return out

    def _factor(self) -> LaurentPoly:
        base = self._atom()
        if self._peek() == "^":
            self.pos += 1
            n = self._int()
            if n >= 0:
                return base ** n
            try:
                u = UnitMonomial.from_poly(base)
            except ValueError:
                raise PolyParseError("negative exponent needs a monomial base", self.pos) from None
            return LaurentPoly.monomial(u.sign if n % 2 else 1, u.i * n, u.j * n, u.k * n)
        return base

    def _atom(self) -> LaurentPoly:
        ch = self._peek()
        if ch == "(":
            self.pos += 1
            out = self._expr()
            if self._peek() != ")":
                raise PolyParseError("expected )", self.pos)
            self.pos += 1
            return out
        if ch == "x":
            self.pos += 1
            return X
        if ch == "y":
            self.pos += 1
            return Y
        if ch == "t":
            self.pos += 1
            return T
        if ch == "-":
            self.pos += 1
            return -self._factor()
        if ch.isdigit():
            return LaurentPoly.const(self._int())
        raise PolyParseError(f"unexpected {ch!r}" if ch else "unexpected end of input", self.pos)

    def _int(self) -> int:
        self._skip()
        start = self.pos
        if self._peek() == "-":
            self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == start or self.text[start:self.pos] == "-":
            raise PolyParseError("expected integer", start)
        return int(self.text[start:self.pos])


def parse_poly(text: str) -> LaurentPoly:
    """Parse the documented polynomial syntax; raises PolyParseError with a position."""
    return _Parser(text).parse()
