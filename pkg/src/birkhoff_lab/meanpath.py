"""Extremal Birkhoff averages as exact min/max mean cycles, plus density checks.

For a locally constant observable the infimum and supremum of integrals over
invariant measures are attained on cycles of the finite transfer graph, so
both optima are computed exactly, each with an attaining simple cycle as
witness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .core import FieldValue, Observable, PeriodicOrbit, Sft
from .debruijn import transfer_graph, walk_word, karp_min_mean
from .errors import BudgetExceeded, InputError
from .orbits import SpectrumReport, cyclic_window_sum, enumerate_primitive_orbits, spectrum


@dataclass(frozen=True)
class MeanCycleResult:
    value: FieldValue
    witness: PeriodicOrbit


def extremal_mean_cycle(sft: Sft, f: Observable, mode: str = "min") -> MeanCycleResult:
    """The exact optimal Birkhoff average over all cycles, with a witness orbit.

    Max mode negates the weights and minimizes.  The witness is a simple
    cycle of the transfer graph, so its period never exceeds the vertex
    count.
    """
    if not f.is_exact:
        raise InputError("extremal_mean_cycle requires an exact-mode observable")
    if mode not in ("min", "max"):
        raise InputError("mode must be 'min' or 'max'")

    g = transfer_graph(sft, f.window, f)
    if mode == "max":
        for i, e in enumerate(g.edges):
            g.edges[i] = type(e)(e.tail, e.head, e.word, -e.weight)
    value, cycle_vertices, _ = karp_min_mean(g)
    if mode == "max":
        value = -value

    word = walk_word(g, cycle_vertices)
    witness = PeriodicOrbit.canonical(word, sft)
    check = cyclic_window_sum(witness.word, f) / witness.period
    assert check == value, "witness average must reproduce the optimum"
    return MeanCycleResult(value, witness)


@dataclass(frozen=True)
class AverageDensity:
    m: FieldValue
    M: FieldValue
    bins: tuple[int, ...]
    largest_gap: tuple
    n_max: int
    degenerate: bool


def average_spectrum_density(sft: Sft, f: Observable, n_max: int,
                             bins: int) -> AverageDensity:
    """Histogram of orbit averages over the closed interval [m(f), M(f)].

    Both endpoints are attained by the extremal cycles, so the first and
    last cells are never empty; the widest average-free sub-interval is the
    reported density defect.
    """
    if bins < 1:
        raise InputError("bins >= 1 required")
    lo = extremal_mean_cycle(sft, f, "min").value
    hi = extremal_mean_cycle(sft, f, "max").value
    report = spectrum(sft, f, n_max)
    averages = [e.average for e in report.entries]

    if lo == hi:
        return AverageDensity(lo, hi, (len(averages),), (lo, hi, FieldValue(0)),
                              n_max, True)

    width = hi - lo
    edges = [lo + width * Fraction(i, bins) for i in range(bins + 1)]
    counts = [0] * bins
    for v in averages:
        for i in range(bins):
            last = i == bins - 1
            if v >= edges[i] and (v < edges[i + 1] or (last and v <= edges[i + 1])):
                counts[i] += 1
                break

    distinct = sorted(set(averages))
    gap = max(
        [(lo, distinct[0], distinct[0] - lo)]
        + [(a, b, b - a) for a, b in zip(distinct, distinct[1:])]
        + [(distinct[-1], hi, hi - distinct[-1])],
        key=lambda t: t[2],
    )
    return AverageDensity(lo, hi, tuple(counts), gap, n_max, False)


def mean_gap_certificate(sft: Sft, f: Observable, a, b,
                         n_max: int = 24) -> PeriodicOrbit:
    """An orbit whose average lies in the open interval (a, b), searched by period.

    Existence is guaranteed whenever m(f) < a < b < M(f); running out of
    budget is therefore reported as exhaustion, never as a negative verdict.
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise InputError("need a < b")
    lo = extremal_mean_cycle(sft, f, "min").value
    hi = extremal_mean_cycle(sft, f, "max").value
    if lo == hi:
        raise InputError("degenerate interval: m(f) = M(f)")
    if not (max(FieldValue(a), lo) < min(FieldValue(b), hi)):
        raise InputError("interval does not meet the interior of [m(f), M(f)]")

    for period in range(1, n_max + 1):
        for orbit in enumerate_primitive_orbits(sft, period):
            if orbit.period != period:
                continue
            s = cyclic_window_sum(orbit.word, f)
            if a * period < s < b * period:
                return orbit
    raise BudgetExceeded(n_max, "average witness search")
