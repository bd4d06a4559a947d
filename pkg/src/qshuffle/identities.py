"""Pole-sum identities for current commutation relations.

The central object is the sum

    L_m = sum over k and permutations of

          [m+1 k]_q prod_{i<j} (z_{s(i)} - z_{s(j)})
          -----------------------------------------------------------------
          prod_{i<=k} (q^-m z_{s(i)} - w) prod_{i>k} (q^-m w - z_{s(i)})
          prod_{i<j} (q^2 z_{s(i)} - z_{s(j)})

with k running from 0 to m+1 and s over permutations of {1..m+1}.  As a
rational function L_m vanishes identically; ``build_pole_sum`` verifies
this by assembling all (m+2)(m+1)! summands over one shared denominator,
so the check reduces to a single numerator being zero.  The q -> 1/q
mirror of the sum vanishes as well.

As a formal distribution the story is finer: expanding each summand in
the region dictated by its k (the first k variables dominate w, the rest
are dominated by it) leaves a one-dimensional delta chain,

    L_m = q^m sum_s s[ delta(w, q^-m z_1) prod_i delta(z_i, q^2 z_{i+1}) ],

and ``window_identity_report`` verifies this equality coefficientwise on
a finite exponent window, checking that the q^-m reading of the w-delta
matches and the q^+m reading does not.

``partial_fraction_check`` covers the two elementary rewriting steps the
reduction rests on, together with named mutations that must all break
them.
"""

from __future__ import annotations

import sys
import time
from dataclasses import dataclass
from itertools import combinations, permutations

from .formal import TruncSeries, Window, delta_series, expand_ratfun, series_mul
from .poly import MultiLaurent, VarId, aux_var, zvar
from .qring import LaurentQ, RatQ, q_binomial
from .ratfun import BinomialFactor, RatFun

W = aux_var("w")


def _zs(m: int) -> list[VarId]:
    return [zvar(1, i) for i in range(1, m + 2)]


def _binom(m: int, k: int, q_inverted: bool) -> RatQ:
    b = q_binomial(m + 1, k)
    if q_inverted:
        b = b.bar()
    return RatQ(b)


def pole_sum_denominator(m: int, q_inverted: bool = False) -> dict[BinomialFactor, int]:
    """All binomials any summand can use; the set is mirror-symmetric, so
    the orientation does not change it."""
    zs = _zs(m)
    den = {}
    for z in zs:
        den[BinomialFactor(z, W, RatQ.q_power(m))] = 1
        den[BinomialFactor(z, W, RatQ.q_power(-m))] = 1
    for a, b in combinations(zs, 2):
        den[BinomialFactor(a, b, RatQ.q_power(2))] = 1
        den[BinomialFactor(a, b, RatQ.q_power(-2))] = 1
    return den


def term_value(m: int, k: int, sigma, q_inverted: bool = False) -> RatFun:
    """One summand, built factor by factor (the slow reference form)."""
    if not 0 <= k <= m + 1:
        raise ValueError("k runs from 0 to m+1")
    e = -1 if q_inverted else 1
    zs = _zs(m)
    num = MultiLaurent.constant(_binom(m, k, q_inverted))
    for i, j in combinations(range(m + 1), 2):
        num = num.mul_binomial(1, zs[sigma[i] - 1], -1, zs[sigma[j] - 1])
    out = RatFun(num)
    for pos in range(m + 1):
        zi = zs[sigma[pos] - 1]
        if pos < k:
            f, unit = BinomialFactor.make(RatQ.q_power(-e * m), zi, RatQ.one(), W)
        else:
            f, unit = BinomialFactor.make(RatQ.q_power(-e * m), W, RatQ.one(), zi)
        out = (out / unit).mul_factor(f, -1)
    for i, j in combinations(range(m + 1), 2):
        f, unit = BinomialFactor.make(
            RatQ.q_power(2 * e), zs[sigma[i] - 1], RatQ.one(), zs[sigma[j] - 1]
        )
        out = (out / unit).mul_factor(f, -1)
    return out


@dataclass
class PoleSum:
    m: int
    q_inverted: bool
    value: RatFun
    term_count: int

    def is_zero(self) -> bool:
        return self.value.is_zero()


def build_pole_sum(
    m: int, q_inverted: bool = False, coeff=None, progress=None
) -> PoleSum:
    """Assemble L_m over the common denominator.

    ``coeff`` may replace the k -> [m+1 k] coefficient map (a scientific
    control; the genuine sum vanishes, a perturbed one must not).
    ``progress`` is called with a status line per k block.
    """
    if m < 1:
        raise ValueError("the pole sum needs m >= 1")
    e = -1 if q_inverted else 1
    zs = _zs(m)
    den = pole_sum_denominator(m, q_inverted)
    npairs = (m + 1) * m // 2

    base = MultiLaurent.constant(1)
    for a, b in combinations(zs, 2):
        base = base.mul_binomial(1, a, -1, b)

    total = MultiLaurent.zero()
    count = 0
    for k in range(m + 2):
        ck = _binom(m, k, q_inverted) if coeff is None else RatQ.coerce(coeff(k))
        if k % 2 != (m + 1) % 2:
            ck = -ck
        for sigma in permutations(range(1, m + 2)):
            inv = sum(
                1
                for i, j in combinations(range(m + 1), 2)
                if sigma[i] > sigma[j]
            )
            used = set()
            for pos in range(m + 1):
                zi = zs[sigma[pos] - 1]
                c = RatQ.q_power(e * m if pos < k else -e * m)
                used.add(BinomialFactor(zi, W, c))
            for i, j in combinations(range(m + 1), 2):
                a, b = sigma[i], sigma[j]
                if a < b:
                    used.add(BinomialFactor(zs[a - 1], zs[b - 1], RatQ.q_power(-2 * e)))
                else:
                    used.add(BinomialFactor(zs[b - 1], zs[a - 1], RatQ.q_power(2 * e)))
            scalar = ck * RatQ.q_power(e * (m * k - 2 * (npairs - inv)))
            part = base.scale(scalar)
            for f in den:
                if f not in used:
                    part = part.mul_binomial(1, f.i, -f.c, f.j)
            total = total + part
            count += 1
        if progress is not None:
            progress(f"m={m} k={k}: {count} terms folded in")
    return PoleSum(m, q_inverted, RatFun(total, den), count)


def verify_rational_vanishing(ms=(1, 2), progress=None) -> dict:
    """Run L_m == 0 for each m in both orientations; returns a report."""
    results = []
    for m in ms:
        for q_inverted in (False, True):
            t0 = time.perf_counter()
            ps = build_pole_sum(m, q_inverted=q_inverted, progress=progress)
            entry = {
                "m": m,
                "q_inverted": q_inverted,
                "zero": ps.is_zero(),
                "term_count": ps.term_count,
                "elapsed_ms": round(1000 * (time.perf_counter() - t0), 1),
            }
            if not ps.is_zero():
                entry["witness"] = str(ps.value)[:200]
            results.append(entry)
    return {"results": results, "all_zero": all(r["zero"] for r in results)}


# ---------- the two partial-fraction steps ----------

PF_MUTATIONS = (
    "scale-sign",
    "scale-shift",
    "pole-swap",
    "exponent-bump",
    "numerator-flip",
)


def _pf_pair(perturb):
    """(lhs, rhs) for both rewriting steps, optionally perturbed."""
    z1, z2 = zvar(1, 1), zvar(1, 2)
    one = RatQ.one()
    q2 = RatQ.q_power(2)
    num = MultiLaurent.var_power(z1, 1) - MultiLaurent.var_power(z2, 1)
    if perturb == "numerator-flip":
        num = MultiLaurent.var_power(z1, 1) + MultiLaurent.var_power(z2, 1)

    # the split constants live in RatQ's fraction field: c/(q^2 + 1)
    q2p1 = LaurentQ({2: 1, 0: 1})

    def inv(a, vi, b, vj):
        f, unit = BinomialFactor.make(a, vi, b, vj)
        return RatFun.inverse_factor(f) / unit

    # step one: split (z1 - z2)/((q^2 z2 - z1)(q^-1 z2 - q z1))
    lhs1 = RatFun(num) * inv(q2, z2, one, z1) * inv(
        RatQ.q_power(-1), z2, RatQ.q_power(1), z1
    )
    c1 = -RatQ(LaurentQ.q_power(1), q2p1)
    if perturb == "scale-sign":
        c1 = -c1
    if perturb == "scale-shift":
        c1 = c1 * RatQ.q_power(1)
    p1a = inv(q2, z2, one, z1)
    p1b = inv(one, z2, q2, z1)
    if perturb == "pole-swap":
        p1a = inv(one, z2, q2, z1)
    rhs1 = (p1a + p1b).scale(c1)

    # step two: split (z1 - z2)/((q^2 z1 - z2)(q^-2 z1 - z2))
    e = 3 if perturb == "exponent-bump" else 2
    lhs2 = RatFun(num) * inv(q2, z1, one, z2) * inv(RatQ.q_power(-e), z1, one, z2)
    c2 = RatQ(LaurentQ.q_power(2), q2p1)
    rhs2 = (inv(q2, z1, one, z2) + inv(one, z1, q2, z2)).scale(c2)
    return [(lhs1, rhs1), (lhs2, rhs2)]


def partial_fraction_check(perturb: str | None = None) -> bool:
    """Both rewriting steps hold; any mutation from PF_MUTATIONS breaks
    at least one of them."""
    if perturb is not None and perturb not in PF_MUTATIONS:
        raise ValueError(f"unknown mutation {perturb!r}")
    return all((lhs - rhs).is_zero() for lhs, rhs in _pf_pair(perturb))


# ---------- the windowed distribution identity ----------


def _lhs_series(m: int, window: Window, q_inverted: bool) -> TruncSeries:
    zs = _zs(m)
    total = None
    for k in range(m + 2):
        order = zs[:k] + [W] + zs[k:]
        base = expand_ratfun(term_value(m, k, tuple(range(1, m + 2)), q_inverted), order, window)
        for sigma in permutations(range(1, m + 2)):
            mapping = {zs[i]: zs[s - 1] for i, s in enumerate(sigma)}
            part = base.relabel(mapping)
            total = part if total is None else total + part
    return total


def _rhs_series(m: int, window: Window, reading: str, q_inverted: bool) -> TruncSeries:
    e = -1 if q_inverted else 1
    zs = _zs(m)
    shift = -e * m if reading == "qminus" else e * m
    pad = 2 * (m + 2)
    wide = Window(window.lo - pad, window.hi + pad)
    total = None
    for sigma in permutations(range(1, m + 2)):
        rel = [zs[s - 1] for s in sigma]
        chain = delta_series(W, RatQ.q_power(shift), rel[0], wide)
        for i in range(m):
            chain = series_mul(
                chain, delta_series(rel[i], RatQ.q_power(2 * e), rel[i + 1], wide)
            )
        total = chain if total is None else total + chain
    return total.scale(RatQ.q_power(e * m))


def window_identity_report(m: int, window: Window, q_inverted: bool = False, rhs_scale=None) -> dict:
    """Compare both delta readings of the identity against the expanded
    sum on the window; exactly the q^-m reading should survive.

    ``rhs_scale`` perturbs the overall delta coefficient (a control: with
    a wrong scale neither reading can match)."""
    lhs = _lhs_series(m, window, q_inverted)
    readings = {}
    boxes = {}
    for reading in ("qminus", "qplus"):
        rhs = _rhs_series(m, window, reading, q_inverted)
        if rhs_scale is not None:
            rhs = rhs.scale(rhs_scale)
        try:
            rel = lhs.reliable.intersect(rhs.reliable).intersect(window)
        except ValueError:
            readings[reading] = False
            boxes[reading] = None
            continue
        readings[reading] = _series_eq_on(lhs, rhs, rel)
        boxes[reading] = rel.as_pair()
    matched = [r for r, ok in readings.items() if ok]
    return {
        "m": m,
        "window": window.as_pair(),
        "q_inverted": q_inverted,
        "readings": readings,
        "matched": matched,
        "compared": boxes,
    }


def _series_eq_on(a: TruncSeries, b: TruncSeries, box: Window) -> bool:
    av = a.with_vars(b.vars)
    bv = b.with_vars(a.vars)
    keys = set(av.terms) | set(bv.terms)
    for exps in keys:
        if not all(box.contains(e) for e in exps):
            continue
        if av.terms.get(exps, RatQ.zero()) != bv.terms.get(exps, RatQ.zero()):
            return False
    return True


def progress_stderr(line: str):
    print(line, file=sys.stderr, flush=True)
