"""Primitive periodic orbits, exact Birkhoff sums, and the spectrum report.

Orbits are enumerated as Lyndon words of the transition graph: each
primitive admissible necklace is produced exactly once, in its
lexicographically minimal rotation.  Sums are evaluated by reading the
observable's window cyclically around the orbit word.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .core import FieldValue, Observable, PeriodicOrbit, Roof, Sft, Word
from .errors import BudgetExceeded, InputError

DEFAULT_ORBIT_CAP = 10_000_000


def _is_lyndon(word: Word) -> bool:
    # strictly smaller than all of its proper rotations: primitive + minimal
    for i in range(1, len(word)):
        if word[i:] + word[:i] <= word:
            return False
    return True


def _collect_from(sft: Sft, start: int, n_max: int, cap: int) -> list[PeriodicOrbit]:
    out: list[PeriodicOrbit] = []
    stack: list[Word] = [(start,)]
    while stack:
        w = stack.pop()
        if sft.allowed(w[-1], w[0]) and _is_lyndon(w):
            out.append(PeriodicOrbit(w))
            if len(out) > cap:
                raise BudgetExceeded(cap, "orbit enumeration cap")
        if len(w) < n_max:
            # letters below the first letter can never appear in a Lyndon word
            for c in range(sft.alphabet_size - 1, start - 1, -1):
                if sft.allowed(w[-1], c):
                    stack.append(w + (c,))
    return out


def enumerate_primitive_orbits(sft: Sft, n_max: int,
                               max_orbits: int = DEFAULT_ORBIT_CAP,
                               threads: int = 1) -> list[PeriodicOrbit]:
    """All primitive admissible necklaces of period <= n_max, sorted by (period, word).

    Enumeration partitions by starting symbol; the final sorted merge makes
    the output identical for any thread count.
    """
    if n_max < 1:
        raise InputError("n_max >= 1 required")
    starts = range(sft.alphabet_size)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(
                lambda s: _collect_from(sft, s, n_max, max_orbits), starts))
    else:
        parts = [_collect_from(sft, s, n_max, max_orbits) for s in starts]
    found = [o for part in parts for o in part]
    if len(found) > max_orbits:
        raise BudgetExceeded(max_orbits, "orbit enumeration cap")
    found.sort(key=lambda o: (o.period, o.word))
    return found


def cyclic_window_sum(word: Word, f: Observable):
    """Sum of f over all windows of the cyclic word (not necessarily primitive)."""
    L = len(word)
    w = f.window
    windows = (tuple(word[(i + j) % L] for j in range(w)) for i in range(L))
    if f.is_exact:
        total = FieldValue(0)
        for win in windows:
            total = total + f.value(win)
        return total
    return math.fsum(f.value(win) for win in windows)


def float_sum_budget(word: Word, f: Observable) -> tuple[float, float]:
    """Float-mode cyclic sum with an explicit rounding budget (fsum is
    correctly rounded, so one ulp of the result bounds the error)."""
    value = cyclic_window_sum(word, f)
    return value, abs(value) * 2.0 ** -52 + 5e-324


def birkhoff_sum(orbit: PeriodicOrbit, f: Observable):
    """Exact (or float-mode) sum of f along one period of the orbit."""
    return cyclic_window_sum(orbit.word, f)


@dataclass(frozen=True)
class SpectrumEntry:
    orbit: PeriodicOrbit
    sum: object
    average: object


@dataclass
class SpectrumReport:
    """The periodic-orbit sums up to a period bound, with growth bookkeeping."""

    sft: Sft
    period_bound: int
    mode: str
    entries: list[SpectrumEntry]
    distinct_values: list
    growth_raw: list  # (period, max |sum| over that period or None)

    def per_period_counts(self) -> dict[int, int]:
        counts: dict[int, int] = {}
        for e in self.entries:
            counts[e.orbit.period] = counts.get(e.orbit.period, 0) + 1
        return counts

    def verify_complete(self) -> bool:
        """Trace-formula cross-check of the per-period orbit counts."""
        counts = self.per_period_counts()
        n = self.sft.alphabet_size
        power = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
        matrix = [list(row) for row in self.sft.transitions]
        for period in range(1, self.period_bound + 1):
            power = [[sum(power[i][k] * matrix[k][j] for k in range(n))
                      for j in range(n)] for i in range(n)]
            trace = sum(power[i][i] for i in range(n))
            fixed = sum(d * counts.get(d, 0)
                        for d in range(1, period + 1) if period % d == 0)
            if fixed != trace:
                return False
        return True


def spectrum(sft: Sft, f: Observable, n_max: int,
             max_orbits: int = DEFAULT_ORBIT_CAP, threads: int = 1) -> SpectrumReport:
    """Exhaustive report of Birkhoff sums over primitive orbits with period <= n_max."""
    orbits = enumerate_primitive_orbits(sft, n_max, max_orbits, threads)
    entries = []
    for orbit in orbits:
        s = birkhoff_sum(orbit, f)
        entries.append(SpectrumEntry(orbit, s, s / orbit.period))

    distinct = sorted(set(e.sum for e in entries))

    growth_raw = []
    by_period: dict[int, list] = {}
    for e in entries:
        by_period.setdefault(e.orbit.period, []).append(abs(e.sum))
    for period in range(1, n_max + 1):
        sums = by_period.get(period)
        growth_raw.append((period, max(sums) if sums else None))

    return SpectrumReport(sft, n_max, f.mode, entries, distinct, growth_raw)


# ---------------------------------------------------------------------------
# Classification of the spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Classification:
    kind: str  # "dispersed" | "concentrated"
    n_max: int
    definitive: bool
    positive_witness: PeriodicOrbit | None = None
    negative_witness: PeriodicOrbit | None = None
    sign: int | None = None  # concentrated only: +1, -1, or 0 when all sums vanish


def classify_observable(report: SpectrumReport) -> Classification:
    """Dispersed with two witnesses, else concentrated at this finite horizon."""
    if not report.entries:
        raise InputError("cannot classify an empty report")
    pos = neg = None
    for e in report.entries:
        s = e.sum.sign() if isinstance(e.sum, FieldValue) else (e.sum > 0) - (e.sum < 0)
        if s > 0 and pos is None:
            pos = e.orbit
        elif s < 0 and neg is None:
            neg = e.orbit
        if pos is not None and neg is not None:
            return Classification("dispersed", report.period_bound, True,
                                  positive_witness=pos, negative_witness=neg)
    sign = 1 if pos is not None else (-1 if neg is not None else 0)
    return Classification("concentrated", report.period_bound, False, sign=sign)


@dataclass(frozen=True)
class ArithmeticVerdict:
    kind: str  # "arithmetic" | "non_arithmetic" | "inconclusive"
    n_max: int
    definitive: bool
    c: FieldValue | None = None
    witness_pair: tuple[PeriodicOrbit, PeriodicOrbit] | None = None


def _fraction_gcd(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(math.gcd(a.numerator, b.numerator),
                    math.lcm(a.denominator, b.denominator))


def arithmetic_test(report: SpectrumReport) -> ArithmeticVerdict:
    """Decide whether the scanned sums sit inside c*Z for a single scale c.

    An irrational ratio between two sums is a definitive negative witness;
    otherwise the finite-horizon generator is |s0| times the rational gcd of
    the ratios.  An all-zero spectrum yields the distinguished c = 0.
    """
    if report.mode != "exact":
        raise InputError("arithmetic_test requires an exact-mode report")
    if not report.entries:
        return ArithmeticVerdict("inconclusive", report.period_bound, False)

    nonzero = [e for e in report.entries if e.sum.sign() != 0]
    if not nonzero:
        return ArithmeticVerdict("arithmetic", report.period_bound, False,
                                 c=FieldValue(0))

    base = nonzero[0]
    ratios = []
    for e in nonzero:
        q = e.sum / base.sum
        if q.irr != 0:
            return ArithmeticVerdict("non_arithmetic", report.period_bound, True,
                                     witness_pair=(e.orbit, base.orbit))
        ratios.append(q.rat)

    g = ratios[0]
    for r in ratios[1:]:
        g = _fraction_gcd(g, r)
    return ArithmeticVerdict("arithmetic", report.period_bound, False,
                             c=abs(base.sum) * g)


def spectrum_growth(report: SpectrumReport):
    """Running per-period maximum of |sum|, the boundedness evidence series."""
    series = []
    current = FieldValue(0) if report.mode == "exact" else 0.0
    for period, mx in report.growth_raw:
        if mx is not None and mx > current:
            current = mx
        series.append((period, current))
    return series


# ---------------------------------------------------------------------------
# Density probing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DensityProbe:
    lo: Fraction
    hi: Fraction
    bins: tuple[int, ...]
    largest_gap: tuple  # (left, right, width) of the widest empty sub-interval
    n_max: int


def density_probe(report: SpectrumReport, lo, hi, bins: int) -> DensityProbe:
    """Distinct-value hit counts on `bins` uniform cells of the open interval (lo, hi).

    Values equal to an endpoint do not count as interior hits.  The widest
    sub-interval of (lo, hi) free of spectrum values is reported as the
    density defect at this horizon.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise InputError("need lo < hi")
    if bins < 1:
        raise InputError("bins >= 1 required")

    inside = [v for v in report.distinct_values
              if isinstance(v, FieldValue) and lo < v < hi]
    if report.mode == "float":
        inside = [v for v in report.distinct_values if lo < v < hi]

    edges = [lo + Fraction(i) * (hi - lo) / bins for i in range(bins + 1)]
    counts = [0] * bins
    for v in inside:
        for i in range(bins):
            last = i == bins - 1
            if (v >= edges[i]) and (v < edges[i + 1] or (last and v <= edges[i + 1])):
                counts[i] += 1
                break

    boundary = sorted(inside)
    if not boundary:
        gap = (lo, hi, hi - lo)
    else:
        gap = max(
            [(lo, boundary[0], boundary[0] - lo)]
            + [(a, b, b - a) for a, b in zip(boundary, boundary[1:])]
            + [(boundary[-1], hi, hi - boundary[-1])],
            key=lambda t: t[2],
        )
    return DensityProbe(lo, hi, tuple(counts), gap, report.period_bound)


# ---------------------------------------------------------------------------
# Suspension-flow spectrum
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FlowEntry:
    orbit: PeriodicOrbit
    flow_period: FieldValue
    integral: object


def flow_spectrum(sft: Sft, f_reduced: Observable, roof: Roof, n_max: int,
                  threads: int = 1) -> list[FlowEntry]:
    """Closed-orbit data of the suspension: period = roof sum, integral = f sum.

    The fiber-integrated observable is supplied directly; with roof 1 the
    flow data coincide entry-for-entry with the discrete spectrum.
    """
    roof_obs = roof.as_observable()
    out = []
    for orbit in enumerate_primitive_orbits(sft, n_max, threads=threads):
        out.append(FlowEntry(orbit,
                             cyclic_window_sum(orbit.word, roof_obs),
                             cyclic_window_sum(orbit.word, f_reduced)))
    return out
