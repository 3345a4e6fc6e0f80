"""Witness-producing number theory over Q(sqrt(D)).

Lattice gaps for rationally related pairs, finite-prefix asymptotic
independence, irrationalizing shifts, pigeonhole densities, and
equidistribution witnesses.  Accept/reject decisions are made by exact
sign computations; floats appear only as search hints or display values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import FieldValue, PeriodicOrbit, ratio_is_rational
from .errors import (
    BudgetExceeded,
    CoverageGap,
    InputError,
    IrrationalRatio,
    NoDistinctAverages,
    NotFound,
)
from .orbits import SpectrumReport


@dataclass(frozen=True)
class RationalRelation:
    """x = (l/k) * y with gcd(l, k) = 1 and k > 0."""

    l: int
    k: int
    a: FieldValue
    b: FieldValue

    @classmethod
    def from_pair(cls, a: FieldValue, b: FieldValue, index=None) -> "RationalRelation":
        ok, ratio = ratio_is_rational(a, b)
        if not ok:
            raise IrrationalRatio(index)
        rel = cls(ratio.numerator, ratio.denominator, a, b)
        assert a * rel.k == b * rel.l
        return rel


def lattice_gap(a: FieldValue, b: FieldValue) -> FieldValue:
    """The exact positive infimum of {|k*a + l*b| > 0 : integers k, l}.

    Equals |b|/k where a/b = l/k in lowest terms.  An irrational ratio
    makes the infimum 0 and raises IrrationalRatio instead of returning a
    number.
    """
    rel = RationalRelation.from_pair(a, b)
    return abs(b) / rel.k


@dataclass(frozen=True)
class IndependenceVerdict:
    independent: bool
    n: int  # prefix length the verdict is based on
    denominators: tuple[int, ...]
    gaps: tuple[FieldValue, ...]  # |b/k_n| per element
    last_refresh: int  # first index where max(k) is attained
    c: FieldValue | None = None
    s_list: tuple[int, ...] | None = None
    t: int | None = None


def asymptotic_independence(seq, b: FieldValue) -> IndependenceVerdict:
    """Classify a finite prefix as evidence for or against unbounded denominators.

    All ratios a_n/b must be rational.  The prefix counts as independence
    evidence when the running maximum of the lowest-terms denominators is
    still being refreshed in its final half; otherwise the common scale
    c = |b|/K! with integer witnesses s_n, t is returned, K the largest
    denominator seen.
    """
    if b.sign() == 0:
        raise InputError("b must be nonzero")
    rels = [RationalRelation.from_pair(a, b, index=i) for i, a in enumerate(seq)]
    if not rels:
        raise InputError("sequence must be nonempty")

    ks = tuple(r.k for r in rels)
    gaps = tuple(abs(b) / k for k in ks)
    K = max(ks)
    last_refresh = ks.index(K)
    independent = 2 * last_refresh >= len(ks)
    if independent:
        return IndependenceVerdict(True, len(ks), ks, gaps, last_refresh)

    sign_b = b.sign()
    factorial = math.factorial(K)
    c = abs(b) / factorial
    s_list = tuple((factorial // r.k) * r.l * sign_b for r in rels)
    t = factorial * sign_b
    for r, s in zip(rels, s_list):
        assert c * s == r.a
    assert c * t == b
    return IndependenceVerdict(False, len(ks), ks, gaps, last_refresh,
                               c=c, s_list=s_list, t=t)


def stern_brocot_rationals():
    """Rationals of (0, 1) in Stern-Brocot breadth-first order: 1/2, 1/3, 2/3, ..."""
    queue = [(Fraction(0), Fraction(1))]
    while queue:
        lo, hi = queue.pop(0)
        mid = Fraction(lo.numerator + hi.numerator, lo.denominator + hi.denominator)
        yield mid
        queue.append((lo, mid))
        queue.append((mid, hi))


def find_beta(a: FieldValue, b: FieldValue, c_list, max_candidates: int = 100_000) -> Fraction:
    """A rational beta in (0, 1) making (a*beta + b)/c_k irrational for every k.

    Requires a, b > 0 with a/b irrational and every c_k > 0.  Each c_k
    excludes at most countably many candidates, so the deterministic
    Stern-Brocot scan terminates; the cap is a safety valve only.
    """
    if a.sign() <= 0 or b.sign() <= 0:
        raise InputError("need a, b > 0")
    if ratio_is_rational(a, b)[0]:
        raise InputError("need a/b irrational")
    cs = list(c_list)
    if not cs:
        raise InputError("c_list must be nonempty")
    for c in cs:
        if c.sign() <= 0:
            raise InputError("every c_k must be > 0")

    for i, beta in enumerate(stern_brocot_rationals()):
        if i >= max_candidates:
            break
        value = a * beta + b
        if all(not ratio_is_rational(value, c)[0] for c in cs):
            return beta
    raise BudgetExceeded(max_candidates, "beta search")


def pigeonhole_density(sets, n0: int, N: int) -> tuple[int, Fraction]:
    """The densest set of a finite cover of [n0, N], with its density on [1, N].

    Returns (index, |A_i ∩ [1,N]| / N); the winner's density is at least
    (N - n0 + 1) / (m N).  A point of [n0, N] missed by the union raises
    CoverageGap with the witness.
    """
    if not N > n0:
        raise InputError("need N > n0")
    if not sets:
        raise InputError("need at least one set")
    universes = [set(s) for s in sets]
    union = set().union(*universes)
    for x in range(n0, N + 1):
        if x not in union:
            raise CoverageGap(x)

    densities = [Fraction(sum(1 for x in s if 1 <= x <= N), N) for s in universes]
    best = max(densities)
    index = densities.index(best)
    assert best >= Fraction(N - n0 + 1, len(sets) * N)
    return index, best


def equidist_witness(alpha_slope: FieldValue, theta: FieldValue, A, gamma) -> int:
    """The least n in A with frac(alpha_slope*n + theta) inside [gamma/4, 1 - gamma/4].

    The bracket test is an exact comparison in Q(sqrt(D)); absence of a
    witness on the finite set signals that the density hypothesis failed on
    this prefix, reported as NotFound.
    """
    if alpha_slope.is_rational:
        raise InputError("alpha_slope must be irrational")
    gamma = Fraction(gamma)
    if not 0 < gamma <= 1:
        raise InputError("gamma must lie in (0, 1]")
    lo = gamma / 4
    hi = 1 - gamma / 4
    elements = sorted(set(int(n) for n in A))
    for n in elements:
        x = (alpha_slope * n + theta).frac()
        if lo <= x <= hi:
            return n
    raise NotFound(elements[-1] if elements else None, "no equidistribution witness")


def dispersion_witness(a: FieldValue, b: FieldValue, c: FieldValue, beta,
                       G: dict, T, A: FieldValue, delta) -> int:
    """The least n in T where c*G(n) - (a*floor(beta n) + b*n) escapes [A-delta, A+delta].

    This is the constructive spread statement: for delta below gamma*c/4
    (gamma the empirical density of T) the values cannot all cluster around
    A.  NotFound means the finite prefix was too short, never that the
    spread fails.
    """
    elements = sorted(set(int(n) for n in T))
    if not elements:
        raise NotFound(None, "empty index set")
    if a.sign() <= 0 or b.sign() <= 0 or c.sign() <= 0:
        raise InputError("need a, b, c > 0")
    if ratio_is_rational(a, b)[0]:
        raise InputError("need a/b irrational")
    beta = Fraction(beta)
    delta = delta if isinstance(delta, FieldValue) else FieldValue(delta)
    gamma = Fraction(len(elements), max(elements))
    if not delta < c * Fraction(gamma, 4):
        raise InputError("need delta < gamma*c/4")

    for n in elements:
        if n not in G:
            raise InputError(f"G has no entry for n = {n}")
        m = math.floor(beta * n)
        residual = c * int(G[n]) - (a * m + b * n) - A
        if abs(residual) > delta:
            return n
    raise NotFound(elements[-1], "no dispersion witness on this prefix")


@dataclass(frozen=True)
class NonArithmeticShift:
    beta: FieldValue
    orbit1: PeriodicOrbit
    orbit2: PeriodicOrbit
    u: FieldValue  # tau_1 * (A_1 - beta)
    v: FieldValue  # tau_2 * (A_2 - beta)


def find_nonarithmetic_beta(report: SpectrumReport, lo, hi,
                            max_rational_candidates: int = 64) -> NonArithmeticShift:
    """A shift beta in (lo, hi) making the shifted sums provably non-arithmetic.

    Uses the first two orbits with distinct averages A1, A2 and searches for
    beta with (A1 - beta)/(A2 - beta) irrational: rationals in Stern-Brocot
    order first, then values q0 + q1*sqrt(D) when every rational ratio is
    forced rational (as happens for integer spectra).  The returned pair
    (u, v) of shifted sums has an irrational ratio, checked exactly.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise InputError("need lo < hi")
    if report.mode != "exact":
        raise InputError("exact-mode report required")

    first = None
    second = None
    for e in report.entries:
        if first is None:
            first = e
        elif e.average != first.average:
            second = e
            break
    if second is None:
        raise NoDistinctAverages()

    a1, a2 = first.average, second.average
    span = hi - lo

    def ratio_ok(beta: FieldValue) -> bool:
        if (a2 - beta).sign() == 0:
            return False
        r = (a1 - beta) / (a2 - beta)
        return r.irr != 0

    chosen = None
    for i, t in enumerate(stern_brocot_rationals()):
        if i >= max_rational_candidates:
            break
        beta = FieldValue(lo + t * span)
        if ratio_ok(beta):
            chosen = beta
            break

    if chosen is None:
        d = a1.d if a1.irr else (a2.d if a2.irr else a1.d)
        mid = lo + span / 2
        for denom in range(2, 2 + max_rational_candidates):
            for s in (1, -1):
                beta = FieldValue(mid, Fraction(s, 2 * denom) * span, d)
                if lo < beta < hi and ratio_ok(beta):
                    chosen = beta
                    break
            if chosen is not None:
                break
    if chosen is None:
        raise BudgetExceeded(max_rational_candidates, "beta search")

    u = (a1 - chosen) * first.orbit.period
    v = (a2 - chosen) * second.orbit.period
    assert not ratio_is_rational(u, v)[0]
    return NonArithmeticShift(chosen, first.orbit, second.orbit, u, v)
