"""(t-1)-adic analysis of matrices over R[t,t^-1].

Every g decomposes as g = A_0 + (t-1)A_1 + (t-1)^2 A_2 + ... with A_i over R;
the derived-layer claim at depth k (d = 2^(k-2)) is

    t1_valuation(g) >= d  and  every A_i lies in Sigma^(2d).

Both conditions have finite, quotient-sized equivalents used by the sampled
suites so that deep layers never require the exact matrix:

  * t1_valuation(g) >= d  iff  g maps to I in the series ring R[s]/(s^d),
    s = t-1, because t = 1+s embeds R[t,t^-1] into R[[s]] (t^-1 is the
    alternating geometric series, and the map is a ring embedding).
  * all (t-1)-coefficients of g - I in Sigma^(2d)  iff  g maps to I over
    (R/Sigma^(2d))[t,t^-1]: a Laurent polynomial in t is determined by its
    t-coefficients, reduced here mod Sigma^(2d) -- no power series needed,
    since a nonzero polynomial of t-span n is never divisible by (t-1)^(n+1).

SeriesContext carries exact integer x,y coefficients (no truncation), so the
valuation side is exact; the sigma side runs on the kernels module.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .rings import LaurentPoly, divide_by_t_minus_one
from .groups import (Matrix2, _free_generators, _letters, free_reduce,
                     random_reduced_word, word_inverse)

SHIFT = Matrix2(LaurentPoly.const(1), LaurentPoly.zero(),
                LaurentPoly.const(-1), LaurentPoly.zero())


@dataclass(frozen=True)
class TAdicCoefficient:
    index: int
    matrix: Matrix2


def _identity_free() -> Matrix2:
    one, zero = LaurentPoly.const(1), LaurentPoly.zero()
    return Matrix2(one, zero, zero, one)


def _spec_t1(M: Matrix2) -> Matrix2:
    return M.map_entries(lambda f: f.specialize(t=1))


def formal_coefficients(g: Matrix2, n: int) -> list[TAdicCoefficient]:
    """A_0..A_n of g = sum (t-1)^i A_i; A_0 is the t=1 specialization."""
    out = []
    gi = g
    for i in range(n + 1):
        ai = _spec_t1(gi)
        out.append(TAdicCoefficient(i, ai))
        if i < n:
            gi = gi.sub(ai).map_entries(divide_by_t_minus_one)
    return out


def formal_coefficient(g: Matrix2, i: int) -> Matrix2:
    if i < 0:
        raise ValueError("coefficient index must be >= 0")
    return formal_coefficients(g, i)[i].matrix


def t1_valuation(g: Matrix2) -> int | float:
    """Largest d with (t-1)^d dividing every entry of g - I; +inf iff g = I."""
    best = math.inf
    for e in g.sub(_identity_free()).entries():
        if e.is_zero():
            continue
        v = 0
        f = e
        while f.specialize(t=1).is_zero():
            f = divide_by_t_minus_one(f)
            v += 1
        best = min(best, v)
    return best


def vanishes_mod_sigma(g: Matrix2, d: int) -> bool:
    """Every Laurent-in-t coefficient of every entry of g - I lies in Sigma^d."""
    for e in g.sub(_identity_free()).entries():
        for coeff in e.t_coefficients().values():
            if not coeff.in_sigma_power(d):
                return False
    return True


def check_derived_layer(g: Matrix2, k: int) -> bool:
    """Layer-k bound, d = 2^(k-2): valuation >= d and coefficients in Sigma^(2d)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    d = 2 ** (k - 2)
    return t1_valuation(g) >= d and vanishes_mod_sigma(g, 2 * d)


# ---------------------------------------------------------------------------
# series quotient R[s]/(s^m): slot vectors of exact 2-variable polynomials.
# Monomials x^i y^j pack into one int key ((i+B) << 16 | (j+B)) so products
# are key additions; exponents stay far below B for any tractable tree.

_B = 1 << 15
_KONE = (_B << 16) | _B
_KBIAS = _KONE


def _pack(i: int, j: int) -> int:
    return ((i + _B) << 16) | (j + _B)


def _unpack(k: int) -> tuple[int, int]:
    return (k >> 16) - _B, (k & 0xFFFF) - _B


def _p2mul_into(acc: dict, a: dict, b: dict):
    if len(a) > len(b):
        a, b = b, a
    get = acc.get
    for k1, c1 in a.items():
        k0 = k1 - _KBIAS
        for k2, c2 in b.items():
            k = k0 + k2
            v = get(k, 0) + c1 * c2
            if v:
                acc[k] = v
            elif k in acc:
                del acc[k]


def _p2addto(acc: dict, b: dict):
    get = acc.get
    for k, c in b.items():
        v = get(k, 0) + c
        if v:
            acc[k] = v
        elif k in acc:
            del acc[k]


def _series_mul(a: list, b: list, m: int) -> list:
    out = [dict() for _ in range(m)]
    for i, ai in enumerate(a):
        if not ai:
            continue
        for j in range(m - i):
            if b[j]:
                _p2mul_into(out[i + j], ai, b[j])
    return out


class SeriesMatrix:
    """2x2 matrix over R[s]/(s^m); entries are slot lists of {(i,j): c} dicts."""

    __slots__ = ("m", "e")

    def __init__(self, m: int, e):
        self.m = m
        self.e = e

    def mul(self, other: "SeriesMatrix") -> "SeriesMatrix":
        m = self.m
        a, b = self.e, other.e
        out = []
        for i in range(2):
            for j in range(2):
                acc = _series_mul(a[2 * i], b[j], m)
                for sl, extra in enumerate(_series_mul(a[2 * i + 1], b[2 + j], m)):
                    _p2addto(acc[sl], extra)
                out.append(acc)
        return SeriesMatrix(m, out)

    def sub_identity_valuation(self) -> int:
        """First s-slot where self differs from I, or m if none (image is I)."""
        for sl in range(self.m):
            for idx in range(4):
                slot = self.e[idx][sl]
                if idx in (0, 3) and sl == 0:
                    if slot != {_KONE: 1}:
                        return 0
                elif slot:
                    return sl
        return self.m

    def is_identity_mod(self, d: int) -> bool:
        return self.sub_identity_valuation() >= d


def _laurent_to_series(f: LaurentPoly, m: int) -> list:
    """Image under t = 1+s in R[s]/(s^m); t^-1 expands as the geometric series."""
    slots = [dict() for _ in range(m)]
    for (i, j, k), c in f.terms.items():
        key = _pack(i, j)
        for r in range(m):
            if k >= 0:
                if r > k:
                    break
                w = math.comb(k, r)
            else:
                w = (-1) ** r * math.comb(-k - 1 + r, r)
            _p2addto(slots[r], {key: c * w})
    return slots


def _one_slots(m: int) -> list:
    s = [dict() for _ in range(m)]
    s[0] = {_KONE: 1}
    return s


def _zero_slots(m: int) -> list:
    return [dict() for _ in range(m)]


class SeriesContext:
    """Generator matrices over R[s]/(s^m) and word/tree evaluation."""

    def __init__(self, m: int):
        if m < 1:
            raise ValueError("need at least one slot")
        self.m = m
        self.gens = {}
        for letter, M in _free_generators().items():
            self.gens[letter] = SeriesMatrix(
                m, [_laurent_to_series(e, m) for e in M.entries()])

    def identity(self) -> SeriesMatrix:
        m = self.m
        return SeriesMatrix(m, [_one_slots(m), _zero_slots(m),
                                _zero_slots(m), _one_slots(m)])

    def eval_word(self, w) -> SeriesMatrix:
        out = None
        for ch in _letters(w):
            g = self.gens[ch]
            out = g if out is None else out.mul(g)
        return self.identity() if out is None else out


# ---------------------------------------------------------------------------
# commutator trees: ("w", word) leaves, ("c", left, right) nodes

def flatten_tree(tree) -> str:
    if tree[0] == "w":
        return tree[1]
    lw, rw = flatten_tree(tree[1]), flatten_tree(tree[2])
    return lw + rw + word_inverse(lw) + word_inverse(rw)


class _Node:
    """Tree-node value with a lazily computed inverse (often never forced)."""

    __slots__ = ("val", "_inv", "_mk")

    def __init__(self, val: SeriesMatrix, mk):
        self.val = val
        self._inv = None
        self._mk = mk

    def inv(self) -> SeriesMatrix:
        if self._inv is None:
            self._inv = self._mk()
        return self._inv


def _delta_of(V: SeriesMatrix):
    """(V - I as slot lists, its valuation); higher slots are shared, not copied."""
    m = V.m
    out = []
    val = m
    for idx in range(4):
        slots = V.e[idx]
        if idx in (0, 3):
            s0 = dict(slots[0])
            c = s0.get(_KONE, 0) - 1
            if c:
                s0[_KONE] = c
            else:
                s0.pop(_KONE, None)
            slots = [s0] + list(slots[1:])
        out.append(slots)
        for sl in range(val):
            if slots[sl]:
                val = sl
                break
    return out, val


def _dmul(a, b, m: int):
    """2x2 product of delta matrices given as 4 slot lists."""
    out = []
    for i in range(2):
        for j in range(2):
            acc = _series_mul(a[2 * i], b[j], m)
            for sl, extra in enumerate(_series_mul(a[2 * i + 1], b[2 + j], m)):
                _p2addto(acc[sl], extra)
            out.append(acc)
    return out


def _plus_identity(delta, m: int, negate: bool = False) -> SeriesMatrix:
    sign = -1 if negate else 1
    e = []
    for idx in range(4):
        slots = [{k: sign * c for k, c in sl.items()} for sl in delta[idx]]
        if idx in (0, 3):
            _p2addto(slots[0], {_KONE: 1})
        e.append(slots)
    return SeriesMatrix(m, e)


def _commutator_node(L: _Node, R: _Node, m: int) -> _Node:
    """[L, R] with an exact short-cut: when 3*min(val A, val B) >= m, every
    term of (I+A)(I+B)(I+A)^-1(I+B)^-1 with three or more delta factors dies
    mod s^m and the product collapses to I + (AB - BA); the inverse is then
    I - (AB - BA) for free."""
    A, va = _delta_of(L.val)
    B, vb = _delta_of(R.val)
    if va >= 1 and vb >= 1 and 3 * min(va, vb) >= m:
        AB = _dmul(A, B, m)
        BA = _dmul(B, A, m)
        delta = []
        for idx in range(4):
            slots = AB[idx]
            for sl, d in enumerate(BA[idx]):
                _p2addto(slots[sl], {k: -c for k, c in d.items()})
            delta.append(slots)
        return _Node(_plus_identity(delta, m),
                     lambda: _plus_identity(delta, m, negate=True))
    val = L.val.mul(R.val).mul(L.inv()).mul(R.inv())
    return _Node(val, lambda: R.val.mul(L.val).mul(R.inv()).mul(L.inv()))


def _eval_tree_node(tree, ctx: SeriesContext) -> _Node:
    if tree[0] == "w":
        w = tree[1]
        return _Node(ctx.eval_word(w), lambda: ctx.eval_word(word_inverse(w)))
    return _commutator_node(_eval_tree_node(tree[1], ctx),
                            _eval_tree_node(tree[2], ctx), ctx.m)


def eval_tree_series(tree, ctx: SeriesContext) -> SeriesMatrix:
    return _eval_tree_node(tree, ctx).val


@dataclass(frozen=True)
class LayerSample:
    tree: tuple
    word: str
    certified: bool  # image differs from I in R[s]/(s^m), so the element is nontrivial
    valuation: int   # first nonzero s-slot of g - I; m when not certified


def sample_layer_element(rng, k: int, ctx: SeriesContext, maxlen: int = 3,
                         retries: int = 8) -> LayerSample:
    """Balanced depth-k commutator tree, resampled per node to dodge collapses."""
    if retries < 1:
        raise ValueError("retries must be >= 1")

    def build(depth: int):
        if depth == 0:
            w = random_reduced_word(rng, maxlen)
            for _ in range(retries - 1):
                if not ctx.eval_word(w).is_identity_mod(ctx.m):
                    break
                w = random_reduced_word(rng, maxlen)
            return ("w", w), _Node(ctx.eval_word(w),
                                   lambda: ctx.eval_word(word_inverse(w)))
        lt, ln = build(depth - 1)
        rt, rn = build(depth - 1)
        nd = _commutator_node(ln, rn, ctx.m)
        for _ in range(retries - 1):
            if not nd.val.is_identity_mod(ctx.m):
                break
            rt, rn = build(depth - 1)
            nd = _commutator_node(ln, rn, ctx.m)
        return ("c", lt, rt), nd

    tree, node = build(k)
    v = node.val.sub_identity_valuation()
    return LayerSample(tree=tree, word=free_reduce(flatten_tree(tree)),
                       certified=v < ctx.m, valuation=v)


@dataclass(frozen=True)
class LayerCheck:
    """valuation is exact when certified, otherwise a lower bound (>= that slot)."""

    k: int
    d: int
    word_length: int
    valuation_ok: bool
    sigma_ok: bool
    valuation: int
    certified: bool

    @property
    def passed(self) -> bool:
        return self.valuation_ok and self.sigma_ok


def check_derived_layer_word(tree_or_word, k: int, lane: str | None = None,
                             ctx: SeriesContext | None = None) -> LayerCheck:
    """check_derived_layer on the element a tree or word defines, via quotients.

    Valuation side: exact series image in R[s]/(s^(d+1)) -- a nonzero slot at
    position v < d+1 certifies t1_valuation exactly v, all-zero certifies
    >= d+1.  Sigma side: the flat word evaluates to I over
    (R/Sigma^(2d))[t,t^-1] iff every (t-1)-coefficient of g - I is in
    Sigma^(2d).
    """
    from . import kernels

    if k < 2:
        raise ValueError("k must be >= 2")
    d = 2 ** (k - 2)
    if isinstance(tree_or_word, tuple):
        tree = tree_or_word
    else:
        tree = ("w", _letters(tree_or_word))
    if ctx is None:
        ctx = SeriesContext(d + 1)
    elif ctx.m < d + 1:
        raise ValueError(f"series context has {ctx.m} slots, need {d + 1}")
    sval = eval_tree_series(tree, ctx).sub_identity_valuation()
    word = free_reduce(flatten_tree(tree))
    sigma_ok = kernels.eval_is_identity(word, kernels.sigma_tables(2 * d), lane=lane)
    return LayerCheck(k=k, d=d, word_length=len(word),
                      valuation_ok=sval >= d, sigma_ok=sigma_ok,
                      valuation=sval, certified=sval < ctx.m)
