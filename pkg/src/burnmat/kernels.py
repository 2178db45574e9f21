"""Fast word evaluation in 2x2 matrices over (R/Sigma^D)[t,t^-1] or S(q)[t,t^-1].

A matrix entry is a Laurent polynomial in t whose coefficients live on the
monomial basis a^r b^s (r+s < D, a = 1-x, b = 1-y).  Multiplying by a basis
monomial is an index shift on that basis, so right-multiplying the running
product by one generator per letter is a handful of shifted scatter-adds.
Three lanes compute the same thing:

  python  exact big-integer dicts, always available, the correctness anchor
  numpy   int64 [T, N] arrays per entry with an overflow guard
  numba   the numpy layout inside one jitted loop

Lane selection: the BURNMAT_KERNEL environment variable (python / numpy /
numba / auto, default auto = numba when importable else numpy).  The int64
lanes raise KernelOverflow past 2^62 / growth and the caller falls back to
the python lane, so results are exact regardless of lane.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

import numpy as np

from .ideals import SContext
from .rings import monomial_list, tri_dim

try:
    from numba import njit

    HAS_NUMBA = True
except ImportError:
    njit = None
    HAS_NUMBA = False

LANES = ("python", "numpy", "numba", "auto")


class KernelOverflow(RuntimeError):
    """An int64 lane exceeded its safe magnitude; retry on the python lane."""


def get_lane(lane: str | None = None) -> str:
    if lane is None:
        lane = os.environ.get("BURNMAT_KERNEL", "auto")
    if lane not in LANES:
        raise ValueError(f"unknown kernel lane {lane!r}; expected one of {LANES}")
    if lane == "auto":
        return "numba" if HAS_NUMBA else "numpy"
    if lane == "numba" and not HAS_NUMBA:
        raise ImportError("BURNMAT_KERNEL=numba but numba is not installed")
    return lane


# ---------------------------------------------------------------------------
# tables: basis shift maps, generator term lists, optional reduction lattice

@dataclass(frozen=True)
class QuotientTables:
    """Everything a lane needs: q is 0 for plain Sigma^D truncation."""

    q: int
    D: int
    N: int
    # maps[m] = (src_idx, dst_idx): multiply by a^r b^s sends coeff[src] to coeff[dst]
    maps: tuple
    # gen_terms[letter][(l, j)] = ((dt, map_id, coeff), ...)
    gen_terms: dict
    # lattice rows sorted by pivot column, empty for plain truncation
    rows: tuple
    pivot_cols: tuple
    one: tuple
    growth: int

    @property
    def guard_limit(self) -> int:
        return (2 ** 63 - 1) // (2 * self.growth)

    def reduce_vec(self, vec: list) -> tuple:
        v = list(vec)
        for row, c in zip(self.rows, self.pivot_cols):
            p = row[c]
            k = v[c] // p
            if k:
                for m in range(c, self.N):
                    v[m] -= k * row[m]
        return tuple(v)


def _shift_maps(D: int):
    basis = monomial_list(D)
    index = {m: i for i, m in enumerate(basis)}
    maps = []
    map_id = {}
    for (r, s) in basis:
        src, dst = [], []
        for i, (p, u) in enumerate(basis):
            tgt = (p + r, u + s)
            if p + r + u + s < D:
                src.append(i)
                dst.append(index[tgt])
        map_id[(r, s)] = len(maps)
        maps.append((np.array(src, dtype=np.int64), np.array(dst, dtype=np.int64)))
    return tuple(maps), map_id, index


def _build_tables(D: int, q: int, rows: tuple, pivot_cols: tuple) -> QuotientTables:
    from .groups import _free_generators

    N = tri_dim(D)
    maps, map_id, _ = _shift_maps(D)
    gen_terms = {}
    for letter, M in _free_generators().items():
        per_entry = {}
        for l in range(2):
            for j in range(2):
                f = M.entries()[2 * l + j]
                terms = []
                for dt, g in f.t_coefficients().items():
                    vec = g.to_truncated(D).coeffs
                    for idx, c in enumerate(vec):
                        if c:
                            rs = monomial_list(D)[idx]
                            terms.append((dt, map_id[rs], c))
                per_entry[(l, j)] = tuple(terms)
        gen_terms[letter] = per_entry
    growth = 1
    for per_entry in gen_terms.values():
        for j in range(2):
            tot = sum(abs(c) for l in range(2) for (_, _, c) in per_entry[(l, j)])
            growth = max(growth, tot)
    one = [0] * N
    one[0] = 1
    t = QuotientTables(q=q, D=D, N=N, maps=maps, gen_terms=gen_terms,
                       rows=rows, pivot_cols=pivot_cols, one=(), growth=growth)
    object.__setattr__(t, "one", t.reduce_vec(one))
    return t


_CACHE: dict = {}


def sigma_tables(D: int) -> QuotientTables:
    """Tables for (R/Sigma^D)[t,t^-1]; no lattice reduction, truncation only."""
    key = ("sigma", D)
    if key not in _CACHE:
        _CACHE[key] = _build_tables(D, 0, (), ())
    return _CACHE[key]


def tables_for(sctx: SContext) -> QuotientTables:
    """Tables for S(q)[t,t^-1] with canonical reduction by the I(q)Sigma lattice."""
    q = sctx.params.q
    key = ("s", q)
    if key not in _CACHE:
        lat = sctx.lattice
        pivots = tuple(next(i for i, v in enumerate(row) if v) for row in lat.rows)
        _CACHE[key] = _build_tables(sctx.params.D, q, lat.rows, pivots)
    return _CACHE[key]


# ---------------------------------------------------------------------------
# result container

@dataclass(frozen=True)
class QuotientMatrix:
    """Entries as {t_exponent: coefficient tuple}, canonically reduced, zeros dropped."""

    q: int
    D: int
    entries: tuple  # (e11, e12, e21, e22)

    def entry(self, i: int, j: int) -> dict:
        return self.entries[2 * i + j]

    def is_identity(self, tables: QuotientTables) -> bool:
        one = {0: tables.one}
        return (self.entries[0] == one and self.entries[3] == one
                and not self.entries[1] and not self.entries[2])


def _normalize(raw_entries, tables: QuotientTables) -> QuotientMatrix:
    zero = (0,) * tables.N
    out = []
    for ent in raw_entries:
        d = {}
        for t, vec in ent.items():
            v = tables.reduce_vec([int(c) for c in vec])
            if v != zero:
                d[t] = v
        out.append(d)
    return QuotientMatrix(q=tables.q, D=tables.D, entries=tuple(out))


def entries_at_t1(res: QuotientMatrix, tables: QuotientTables) -> list:
    """Substitute t = 1: sum each entry's coefficient vectors, canonically reduced."""
    out = []
    for ent in res.entries:
        acc = [0] * tables.N
        for vec in ent.values():
            for m, c in enumerate(vec):
                acc[m] += c
        out.append(tables.reduce_vec(acc))
    return out


# ---------------------------------------------------------------------------
# python lane: dict t -> bigint list, exact

def _eval_python(word: str, tables: QuotientTables, reduce_every: int):
    N = tables.N
    one = [0] * N
    one[0] = 1
    cur = [{0: one[:]}, {}, {}, {0: one[:]}]
    do_reduce = bool(tables.rows)
    for pos, ch in enumerate(word):
        terms = tables.gen_terms[ch]
        new = [{}, {}, {}, {}]
        for i in range(2):
            for j in range(2):
                acc = new[2 * i + j]
                for l in range(2):
                    src_ent = cur[2 * i + l]
                    if not src_ent:
                        continue
                    for dt, mp, c in terms[(l, j)]:
                        src_idx, dst_idx = tables.maps[mp]
                        for t, vec in src_ent.items():
                            row = acc.get(t + dt)
                            if row is None:
                                row = [0] * N
                                acc[t + dt] = row
                            for s, d in zip(src_idx, dst_idx):
                                v = vec[s]
                                if v:
                                    row[d] += c * v
        cur = new
        if do_reduce and reduce_every and (pos + 1) % reduce_every == 0:
            cur = [{t: list(tables.reduce_vec(v)) for t, v in ent.items()}
                   for ent in cur]
    return [{t: v for t, v in ent.items() if any(v)} for ent in cur]


# ---------------------------------------------------------------------------
# numpy lane: int64 [T, N] per entry with live t-window tracking

def _eval_numpy(word: str, tables: QuotientTables, reduce_every: int):
    N = tables.N
    L = len(word)
    T = 2 * L + 3
    c0 = L + 1
    cur = np.zeros((4, T, N), dtype=np.int64)
    cur[0, c0, 0] = 1
    cur[3, c0, 0] = 1
    lo = hi = c0
    limit = tables.guard_limit
    rows = np.array(tables.rows, dtype=np.int64) if tables.rows else None
    for pos, ch in enumerate(word):
        terms = tables.gen_terms[ch]
        dts = [dt for per in terms.values() for (dt, _, _) in per]
        nlo = lo + min(0, min(dts))
        nhi = hi + max(0, max(dts))
        new = np.zeros((4, nhi - nlo + 1, N), dtype=np.int64)
        win = cur[:, lo:hi + 1]
        for i in range(2):
            for j in range(2):
                acc = new[2 * i + j]
                for l in range(2):
                    src = win[2 * i + l]
                    for dt, mp, c in terms[(l, j)]:
                        src_idx, dst_idx = tables.maps[mp]
                        off = lo + dt - nlo
                        acc[off:off + (hi - lo + 1)][:, dst_idx] += c * src[:, src_idx]
        if np.abs(new).max() > limit:
            if rows is None:
                raise KernelOverflow(f"coefficients exceeded int64 guard at letter {pos}")
            _np_reduce(new, rows, tables.pivot_cols)
            if np.abs(new).max() > limit:
                raise KernelOverflow(f"coefficients exceeded int64 guard at letter {pos}")
        elif rows is not None and reduce_every and (pos + 1) % reduce_every == 0:
            _np_reduce(new, rows, tables.pivot_cols)
        cur = np.zeros((4, T, N), dtype=np.int64)
        cur[:, nlo:nhi + 1] = new
        lo, hi = nlo, nhi
    out = []
    for e in range(4):
        ent = {}
        for t in range(lo, hi + 1):
            vec = cur[e, t]
            if vec.any():
                ent[t - c0] = [int(v) for v in vec]
        out.append(ent)
    return out


def _np_reduce(arr: np.ndarray, rows: np.ndarray, pivot_cols: tuple):
    """In-place canonical reduction of every t-slice by the HNF rows."""
    for r in range(rows.shape[0]):
        c = pivot_cols[r]
        p = rows[r, c]
        k = arr[..., c] // p
        if np.any(k):
            arr -= k[..., None] * rows[r]


# ---------------------------------------------------------------------------
# numba lane: same layout, one jitted loop over packed tables

_NUMBA_KERNEL = None
_PACKED: dict = {}


def _pack_tables(tables: QuotientTables):
    key = (tables.q, tables.D)
    if key in _PACKED:
        return _PACKED[key]
    N = tables.N
    offs = np.zeros((4, 2, 2, 2), dtype=np.int64)
    t_dt, t_mp, t_c = [], [], []
    for li, letter in enumerate("aAbB"):
        for l in range(2):
            for j in range(2):
                offs[li, l, j, 0] = len(t_dt)
                for dt, mp, c in tables.gen_terms[letter][(l, j)]:
                    t_dt.append(dt)
                    t_mp.append(mp)
                    t_c.append(c)
                offs[li, l, j, 1] = len(t_dt)
    map_off = np.zeros(len(tables.maps) + 1, dtype=np.int64)
    msrc, mdst = [], []
    for m, (src, dst) in enumerate(tables.maps):
        msrc.extend(src.tolist())
        mdst.extend(dst.tolist())
        map_off[m + 1] = len(msrc)
    rows = (np.array(tables.rows, dtype=np.int64) if tables.rows
            else np.zeros((0, N), dtype=np.int64))
    pivots = np.array(tables.pivot_cols, dtype=np.int64)
    packed = (offs,
              np.array(t_dt, dtype=np.int64), np.array(t_mp, dtype=np.int64),
              np.array(t_c, dtype=np.int64), map_off,
              np.array(msrc, dtype=np.int64), np.array(mdst, dtype=np.int64),
              rows, pivots)
    _PACKED[key] = packed
    return packed


def _get_numba_kernel():
    global _NUMBA_KERNEL
    if _NUMBA_KERNEL is not None:
        return _NUMBA_KERNEL

    @njit
    def kernel(codes, offs, t_dt, t_mp, t_c, map_off, msrc, mdst,
               rows, pivots, N, reduce_every, limit):
        L = codes.shape[0]
        T = 2 * L + 3
        c0 = L + 1
        cur = np.zeros((4, T, N), dtype=np.int64)
        new = np.zeros((4, T, N), dtype=np.int64)
        cur[0, c0, 0] = 1
        cur[3, c0, 0] = 1
        lo = c0
        hi = c0
        R = rows.shape[0]
        for pos in range(L):
            letter = codes[pos]
            nlo = lo - 1
            nhi = hi + 1
            for e in range(4):
                for t in range(nlo, nhi + 1):
                    for n in range(N):
                        new[e, t, n] = 0
            for i in range(2):
                for l in range(2):
                    se = 2 * i + l
                    for j in range(2):
                        de = 2 * i + j
                        for ti in range(offs[letter, l, j, 0], offs[letter, l, j, 1]):
                            dt = t_dt[ti]
                            c = t_c[ti]
                            m0 = map_off[t_mp[ti]]
                            m1 = map_off[t_mp[ti] + 1]
                            for t in range(lo, hi + 1):
                                for mi in range(m0, m1):
                                    v = cur[se, t, msrc[mi]]
                                    if v != 0:
                                        new[de, t + dt, mdst[mi]] += c * v
            do_red = R > 0 and reduce_every > 0 and (pos + 1) % reduce_every == 0
            if do_red:
                for e in range(4):
                    for t in range(nlo, nhi + 1):
                        for r in range(R):
                            pc = pivots[r]
                            k = new[e, t, pc] // rows[r, pc]
                            if k != 0:
                                for n in range(pc, N):
                                    new[e, t, n] -= k * rows[r, n]
            mx = 0
            for e in range(4):
                for t in range(nlo, nhi + 1):
                    for n in range(N):
                        v = new[e, t, n]
                        if v < 0:
                            v = -v
                        if v > mx:
                            mx = v
            if mx > limit:
                return cur, lo, hi, 1
            tmp = cur
            cur = new
            new = tmp
            lo = nlo
            hi = nhi
        return cur, lo, hi, 0

    _NUMBA_KERNEL = kernel
    return kernel


def _eval_numba(word: str, tables: QuotientTables, reduce_every: int):
    codes = np.array([("aAbB").index(ch) for ch in word], dtype=np.int64)
    packed = _pack_tables(tables)
    kernel = _get_numba_kernel()
    cur, lo, hi, flag = kernel(codes, *packed, tables.N, reduce_every,
                               tables.guard_limit)
    if flag:
        raise KernelOverflow("coefficients exceeded int64 guard")
    c0 = len(word) + 1
    out = []
    for e in range(4):
        ent = {}
        for t in range(lo, hi + 1):
            vec = cur[e, t]
            if vec.any():
                ent[t - c0] = [int(v) for v in vec]
        out.append(ent)
    return out


# ---------------------------------------------------------------------------
# entry points

def eval_word_quotient(word: str, tables: QuotientTables, lane: str | None = None,
                       reduce_every: int = 16) -> QuotientMatrix:
    """Evaluate a word left to right; falls back to the python lane on overflow."""
    chosen = get_lane(lane)
    if chosen != "python":
        fn = _eval_numba if chosen == "numba" else _eval_numpy
        try:
            return _normalize(fn(word, tables, reduce_every), tables)
        except KernelOverflow:
            pass
    return _normalize(_eval_python(word, tables, reduce_every), tables)


def eval_is_identity(word: str, tables: QuotientTables, lane: str | None = None) -> bool:
    return eval_word_quotient(word, tables, lane=lane).is_identity(tables)
