"""Truncated formal distributions with verified multiplication.

A bilateral series like the formal delta has coefficients on infinitely
many exponents, so we store only the coefficients whose exponent vector
lies inside a finite per-variable window.  The point of this module is
that products of such truncations are only meaningful when the full
(untruncated) product is locally finite: each output exponent must
receive finitely many contributions, and all of them must come from the
stored part of each operand.

``TruncSeries`` therefore carries, besides its terms:

* ``window``    -- the per-variable exponent box the truncation targets;
* ``reliable``  -- the sub-box on which stored coefficients are exact;
* ``support``   -- a structural description of the *true* support:
  per-variable exponent bounds (possibly infinite) plus "ties", linear
  relations sum(e_v for v in Z) = c that every true term satisfies.

``series_mul`` runs an interval-propagation argument over this data.  If
it cannot bound the contributing exponents it raises
``NonAdmissibleProduct`` instead of returning garbage; if contributions
would come from outside an operand's reliable box it shrinks the result
window until they cannot.  Multiplying the two opposite expansions of
1/(z-w) fails; delta chains pass.  All series here are over Q(q) and the
objects are immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .poly import MultiLaurent, VarId, _sorted_vars
from .qring import RQ_ONE, RatQ
from .ratfun import BinomialFactor, RatFun


class NonAdmissibleProduct(ArithmeticError):
    """The requested series product is not structurally locally finite."""


@dataclass(frozen=True)
class Window:
    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("empty window")

    def intersect(self, other: Window) -> Window:
        return Window(max(self.lo, other.lo), min(self.hi, other.hi))

    def contains(self, e: int) -> bool:
        return self.lo <= e <= self.hi

    def as_pair(self):
        return (self.lo, self.hi)


# intervals are (lo, hi) pairs with None meaning unbounded on that side
_FULL = (None, None)


def _iv_meet(a, b):
    lo = b[0] if a[0] is None else a[0] if b[0] is None else max(a[0], b[0])
    hi = b[1] if a[1] is None else a[1] if b[1] is None else min(a[1], b[1])
    return (lo, hi)


def _iv_empty(a) -> bool:
    return a[0] is not None and a[1] is not None and a[0] > a[1]


def _iv_sum(ivs):
    lo = 0
    hi = 0
    for a, b in ivs:
        lo = None if (lo is None or a is None) else lo + a
        hi = None if (hi is None or b is None) else hi + b
    return (lo, hi)


def _iv_const_minus(c: int, iv):
    lo = None if iv[1] is None else c - iv[1]
    hi = None if iv[0] is None else c - iv[0]
    return (lo, hi)


def _iv_window_minus(w: Window, iv):
    lo = None if iv[1] is None else w.lo - iv[1]
    hi = None if iv[0] is None else w.hi - iv[0]
    return (lo, hi)


@dataclass(frozen=True)
class Support:
    """Structural over-approximation of a series' true support."""

    bounds: dict  # VarId -> (lo|None, hi|None)
    ties: dict  # frozenset[VarId] -> int

    def bound(self, v: VarId):
        return self.bounds.get(v, (0, 0))

    def relabel(self, mapping: dict) -> Support:
        nb = {mapping.get(v, v): iv for v, iv in self.bounds.items()}
        nt = {
            frozenset(mapping.get(v, v) for v in Z): c
            for Z, c in self.ties.items()
        }
        return Support(nb, nt)


def _merge_supports_for_sum(a: Support, b: Support) -> Support:
    bounds = {}
    for v in set(a.bounds) | set(b.bounds):
        ia, ib = a.bound(v), b.bound(v)
        lo = None if ia[0] is None or ib[0] is None else min(ia[0], ib[0])
        hi = None if ia[1] is None or ib[1] is None else max(ia[1], ib[1])
        bounds[v] = (lo, hi)
    ties = {Z: c for Z, c in a.ties.items() if b.ties.get(Z) == c}
    return Support(bounds, ties)


class TruncSeries:
    """A windowed truncation of a formal distribution over Q(q)."""

    __slots__ = ("vars", "terms", "window", "reliable", "support")

    def __init__(self, vars, terms, window: Window, reliable: Window, support: Support):
        vs = _sorted_vars(vars)
        if not (window.lo <= reliable.lo and reliable.hi <= window.hi):
            raise ValueError("reliable window must sit inside the window")
        box = reliable
        clean = {}
        for exps, c in terms.items():
            c = RatQ.coerce(c)
            if not c:
                continue
            if len(exps) != len(vs):
                raise ValueError("exponent tuple length mismatch")
            if all(box.contains(e) for e in exps):
                clean[tuple(exps)] = c
        self.vars = vs
        self.terms = clean
        self.window = window
        self.reliable = reliable
        self.support = support

    # ---------- constructors ----------

    @classmethod
    def from_poly(cls, p: MultiLaurent, window: Window) -> TruncSeries:
        bounds = {v: p.exp_range(v) for v in p.vars}
        deg = p.total_degree_if_homogeneous()
        ties = {}
        if p.vars and not p.is_zero() and deg is not None:
            ties[frozenset(p.vars)] = deg
        return cls(p.vars, dict(p.terms), window, window, Support(bounds, ties))

    # ---------- bookkeeping ----------

    def with_vars(self, extra) -> TruncSeries:
        vs = _sorted_vars(self.vars + tuple(extra))
        if vs == self.vars:
            return self
        pos = {v: i for i, v in enumerate(vs)}
        old = [pos[v] for v in self.vars]
        n = len(vs)
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * n
            for slot, e in zip(old, exps):
                new[slot] = e
            terms[tuple(new)] = c
        bounds = dict(self.support.bounds)
        for v in vs:
            bounds.setdefault(v, (0, 0))
        return TruncSeries(
            vs, terms, self.window, self.reliable, Support(bounds, self.support.ties)
        )

    def relabel(self, mapping: dict) -> TruncSeries:
        new_of = {v: mapping.get(v, v) for v in self.vars}
        if len(set(new_of.values())) != len(new_of):
            raise ValueError("relabeling must be injective on the registry")
        vs = _sorted_vars(new_of.values())
        pos = {u: i for i, u in enumerate(vs)}
        src = [pos[new_of[v]] for v in self.vars]
        n = len(vs)
        terms = {}
        for exps, c in self.terms.items():
            new = [0] * n
            for slot, e in zip(src, exps):
                new[slot] = e
            terms[tuple(new)] = c
        return TruncSeries(
            vs, terms, self.window, self.reliable, self.support.relabel(mapping)
        )

    def coeff(self, exps) -> RatQ:
        return self.terms.get(tuple(exps), RatQ.zero())

    def scale(self, c) -> TruncSeries:
        c = RatQ.coerce(c)
        terms = {e: k * c for e, k in self.terms.items()} if c else {}
        return TruncSeries(self.vars, terms, self.window, self.reliable, self.support)

    # ---------- addition ----------

    def __add__(self, other: TruncSeries) -> TruncSeries:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        a = self.with_vars(other.vars)
        b = other.with_vars(self.vars)
        window = a.window.intersect(b.window)
        reliable = a.reliable.intersect(b.reliable)
        terms = dict(a.terms)
        for exps, c in b.terms.items():
            prev = terms.get(exps)
            s = c if prev is None else prev + c
            if s:
                terms[exps] = s
            else:
                terms.pop(exps, None)
        support = _merge_supports_for_sum(a.support, b.support)
        return TruncSeries(a.vars, terms, window, reliable, support)

    def __neg__(self) -> TruncSeries:
        return self.scale(-1)

    def __sub__(self, other: TruncSeries) -> TruncSeries:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return self + other.scale(-1)

    # ---------- multiplication ----------

    def __mul__(self, other: TruncSeries) -> TruncSeries:
        if not isinstance(other, TruncSeries):
            return NotImplemented
        return series_mul(self, other)

    def __str__(self) -> str:
        n = len(self.terms)
        return (
            f"TruncSeries[{', '.join(map(str, self.vars))}] "
            f"({n} terms on {self.reliable.as_pair()} of {self.window.as_pair()})"
        )

    __repr__ = __str__


# ---------- elementary series ----------


def expand_inverse(
    factor: BinomialFactor, dominant: VarId, window: Window
) -> TruncSeries:
    """Expansion of 1/(z_i - c z_j) in the region where ``dominant`` wins.

    Dominant z_i gives sum(c^t z_j^t z_i^(-1-t), t >= 0); dominant z_j
    gives the negative of the mirrored sum.
    """
    i, j, c = factor.i, factor.j, factor.c
    if dominant == i:
        big, small, base, k0 = i, j, c, RQ_ONE
    elif dominant == j:
        big, small, base, k0 = j, i, RQ_ONE / c, -(RQ_ONE / c)
    else:
        raise ValueError("dominant variable must belong to the factor")
    vs = _sorted_vars((i, j))
    bi, si = vs.index(big), vs.index(small)
    terms = {}
    coeff = k0
    t = 0
    while True:
        eb, es = -1 - t, t
        if eb < window.lo and es > window.hi:
            break
        if window.contains(eb) and window.contains(es):
            exps = [0, 0]
            exps[bi], exps[si] = eb, es
            terms[tuple(exps)] = coeff
        coeff = coeff * base
        t += 1
    bounds = {big: (None, -1), small: (0, None)}
    ties = {frozenset((i, j)): -1}
    return TruncSeries(vs, terms, window, window, Support(bounds, ties))


def expand_binomial_inverse(a, vi, b, vj, dominant, window: Window) -> TruncSeries:
    """Expansion of 1/(a z_vi - b z_vj) with raw coefficients."""
    f, unit = BinomialFactor.make(a, vi, b, vj)
    return expand_inverse(f, dominant, window).scale(RQ_ONE / unit)


def delta_series(x: VarId, c, y: VarId, window: Window) -> TruncSeries:
    """The formal delta at x = c y: sum(c^(-i-1) x^i y^(-i-1)) over all i."""
    c = RatQ.coerce(c)
    if not c.is_q_monomial():
        raise ValueError("delta scalar must be a nonzero q-monomial")
    vs = _sorted_vars((x, y))
    xi, yi = vs.index(x), vs.index(y)
    terms = {}
    for i in range(max(window.lo, -1 - window.hi), min(window.hi, -1 - window.lo) + 1):
        exps = [0, 0]
        exps[xi], exps[yi] = i, -1 - i
        terms[tuple(exps)] = c ** (-i - 1)
    bounds = {x: _FULL, y: _FULL}
    ties = {frozenset((x, y)): -1}
    return TruncSeries(vs, terms, window, window, Support(bounds, ties))


# ---------- verified multiplication ----------

_MAX_ROUNDS = 64


def _propagate(a: TruncSeries, b: TruncSeries, vs, cand: Window):
    """Bound, per variable, the operand exponents that can contribute to
    a result exponent inside ``cand``.  Returns (A, B) interval dicts,
    "empty" when no contribution is possible, or None when some interval
    stays unbounded (the structural check fails)."""
    A = {v: a.support.bound(v) if v in a.vars else (0, 0) for v in vs}
    B = {v: b.support.bound(v) if v in b.vars else (0, 0) for v in vs}
    for _ in range(_MAX_ROUNDS):
        changed = False
        for v in vs:
            na = _iv_meet(A[v], _iv_window_minus(cand, B[v]))
            nb = _iv_meet(B[v], _iv_window_minus(cand, A[v]))
            if na != A[v]:
                A[v] = na
                changed = True
            if nb != B[v]:
                B[v] = nb
                changed = True
        for side, ties in ((A, a.support.ties), (B, b.support.ties)):
            for Z, c in ties.items():
                for v in Z:
                    if v not in side:
                        continue
                    rest = _iv_sum(side[u] for u in Z if u != v and u in side)
                    nv = _iv_meet(side[v], _iv_const_minus(c, rest))
                    if nv != side[v]:
                        side[v] = nv
                        changed = True
        if any(_iv_empty(iv) for iv in list(A.values()) + list(B.values())):
            return "empty"
        if not changed:
            break
    for iv in list(A.values()) + list(B.values()):
        if iv[0] is None or iv[1] is None:
            return None
    return A, B


def series_mul(a: TruncSeries, b: TruncSeries) -> TruncSeries:
    """Product of two truncations, verified to be locally finite.

    Raises NonAdmissibleProduct when the structural support data cannot
    certify finiteness (e.g. opposite expansions of the same binomial),
    or when no nonempty result window can be made reliable.
    """
    a = a.with_vars(b.vars)
    b = b.with_vars(a.vars)
    vs = a.vars
    window = a.window.intersect(b.window)
    cand = a.reliable.intersect(b.reliable)
    empty = False
    while True:
        got = _propagate(a, b, vs, cand)
        if got == "empty":
            empty = True
            break
        if got is None:
            raise NonAdmissibleProduct(
                "cannot certify local finiteness of the series product"
            )
        A, B = got
        lo_bump = False
        hi_bump = False
        for side, s in ((A, a), (B, b)):
            for v in vs:
                iv = side[v]
                if v in s.vars:
                    if iv[0] < s.reliable.lo:
                        lo_bump = True
                    if iv[1] > s.reliable.hi:
                        hi_bump = True
                else:
                    # absent variables only ever contribute exponent 0
                    if iv[0] < 0 or iv[1] > 0:
                        raise NonAdmissibleProduct(
                            "contribution bound escapes an absent variable"
                        )
        if not (lo_bump or hi_bump):
            break
        lo = cand.lo + (1 if lo_bump else 0)
        hi = cand.hi - (1 if hi_bump else 0)
        if lo > hi:
            raise NonAdmissibleProduct(
                "no reliable result window left; enlarge the operand windows"
            )
        cand = Window(lo, hi)

    terms = {}
    if not empty:
        bi = [B[v] for v in vs]
        ai = [A[v] for v in vs]
        bterms = [
            (eb, cb)
            for eb, cb in b.terms.items()
            if all(l <= e <= h for e, (l, h) in zip(eb, bi))
        ]
        for ea, ca in a.terms.items():
            if not all(l <= e <= h for e, (l, h) in zip(ea, ai)):
                continue
            for eb, cb in bterms:
                key = tuple(x + y for x, y in zip(ea, eb))
                if all(cand.contains(e) for e in key):
                    prev = terms.get(key)
                    s = ca * cb if prev is None else prev + ca * cb
                    if s:
                        terms[key] = s
                    else:
                        del terms[key]

    bounds = {}
    for v in vs:
        iva = a.support.bound(v) if v in a.vars else (0, 0)
        ivb = b.support.bound(v) if v in b.vars else (0, 0)
        bounds[v] = _iv_sum((iva, ivb))
    ties = _combine_ties(a, b)
    return TruncSeries(vs, terms, window, cand, Support(bounds, ties))


def _fixed_sum(s: TruncSeries, Z) -> int | None:
    """Sum of the forced exponents of Z on s, or None if not forced."""
    total = 0
    for v in Z:
        iv = s.support.bound(v) if v in s.vars else (0, 0)
        if iv[0] is None or iv[0] != iv[1]:
            return None
        total += iv[0]
    return total


def _combine_ties(a: TruncSeries, b: TruncSeries) -> dict:
    ties = {}
    for Z, c in a.support.ties.items():
        k = _fixed_sum(b, Z)
        if k is not None:
            ties[Z] = c + k
    for Z, c in b.support.ties.items():
        k = _fixed_sum(a, Z)
        if k is not None and Z not in ties:
            ties[Z] = c + k
    for Za, ca in a.support.ties.items():
        for Zb, cb in b.support.ties.items():
            Z = Za | Zb
            ka = _fixed_sum(a, Zb - Za)
            kb = _fixed_sum(b, Za - Zb)
            if ka is not None and kb is not None and Z not in ties:
                ties[Z] = ca + cb + ka + kb
    return ties


# ---------- rational-function expansion ----------


def expand_ratfun(f: RatFun, order, window: Window) -> TruncSeries:
    """Iterated Laurent expansion of a RatFun in a dominance order.

    ``order`` lists variables from most to least dominant and must cover
    every variable of f.  Each denominator factor is expanded in the
    geometric series dictated by its more dominant variable; the result
    is exact on the whole window (reliable equals window).
    """
    order = list(order)
    if len(set(order)) != len(order):
        raise ValueError("duplicate variable in expansion order")
    missing = [v for v in f.vars() if v not in order]
    if missing:
        raise ValueError(f"expansion order misses variables: {missing}")
    if f.is_zero():
        vs = _sorted_vars(order)
        return TruncSeries(
            vs,
            {},
            window,
            window,
            Support({v: (0, 0) for v in vs}, {}),
        )

    pos = {v: k for k, v in enumerate(order)}
    num = f.num.with_vars(order)
    vs = num.vars
    idx = {v: i for i, v in enumerate(vs)}

    # one entry per denominator copy: (dominant, subordinate, scalar)
    copies = []
    for fac, mult in f.den.items():
        if pos[fac.i] < pos[fac.j]:
            dom, sub, base, unit = fac.i, fac.j, fac.c, RQ_ONE
        else:
            dom, sub, base, unit = fac.j, fac.i, RQ_ONE / fac.c, -(RQ_ONE / fac.c)
        for _ in range(mult):
            copies.append((dom, sub, base, unit))

    # cap the geometric index of each copy by walking down the dominance
    # order: contributions below window.lo in the dominant variable of a
    # copy can never climb back
    nmax = {v: num.exp_range(v)[1] for v in vs}
    caps = [0] * len(copies)
    for v in order:
        D = [k for k, cp in enumerate(copies) if cp[0] == v]
        S = [k for k, cp in enumerate(copies) if cp[1] == v]
        if not D:
            continue
        total = nmax[v] - len(D) - window.lo + sum(caps[k] for k in S)
        for k in D:
            caps[k] = max(0, total)

    # remaining per-variable exponent drift once some copies are still
    # unapplied; used to prune dead partial terms early
    def drift(start: int):
        lo = {v: 0 for v in vs}
        hi = {v: 0 for v in vs}
        for k in range(start, len(copies)):
            dom, sub, _, _ = copies[k]
            lo[dom] -= 1 + caps[k]
            hi[dom] -= 1
            hi[sub] += caps[k]
        return lo, hi

    partial = dict(num.terms)
    for k, (dom, sub, base, unit) in enumerate(copies):
        dlo, dhi = drift(k + 1)
        di, si = idx[dom], idx[sub]
        out = {}
        for exps, co in partial.items():
            coeff = co * unit
            for t in range(caps[k] + 1):
                lst = list(exps)
                lst[di] -= 1 + t
                lst[si] += t
                dead = False
                for v, e in zip(vs, lst):
                    if e + dhi[v] < window.lo or e + dlo[v] > window.hi:
                        dead = True
                        break
                if not dead:
                    key = tuple(lst)
                    prev = out.get(key)
                    s = coeff if prev is None else prev + coeff
                    if s:
                        out[key] = s
                    else:
                        del out[key]
                coeff = coeff * base
        partial = out

    box = {}
    for v in vs:
        D = sum(1 for cp in copies if cp[0] == v)
        S = sum(1 for cp in copies if cp[1] == v)
        lo, hi = num.exp_range(v)
        box[v] = (None if D else lo, (hi - D) if not S else None)
    ties = {}
    deg = num.total_degree_if_homogeneous()
    if deg is not None and vs:
        ties[frozenset(vs)] = deg - len(copies)
    terms = {
        e: c for e, c in partial.items() if all(window.contains(x) for x in e)
    }
    return TruncSeries(vs, terms, window, window, Support(box, ties))


# ---------- comparison ----------


def compare_on_window(a: TruncSeries, b: TruncSeries, window: Window | None = None) -> bool:
    """Exact coefficient comparison on the common reliable box."""
    a = a.with_vars(b.vars)
    b = b.with_vars(a.vars)
    try:
        box = a.reliable.intersect(b.reliable)
        if window is not None:
            box = box.intersect(window)
    except ValueError:
        raise ValueError("empty reliable intersection; enlarge the windows")
    for exps, c in a.terms.items():
        if all(box.contains(e) for e in exps):
            if b.terms.get(exps, RatQ.zero()) != c:
                return False
    for exps, c in b.terms.items():
        if all(box.contains(e) for e in exps):
            if a.terms.get(exps, RatQ.zero()) != c:
                return False
    return True
