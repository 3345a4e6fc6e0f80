"""Acceptance gate: one test per criterion, each printing a pass/fail line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines as they
print.  Every comparison below is exact unless a criterion states a float
bound explicitly.
"""

import random
import time
from fractions import Fraction

import networkx as nx
import numpy as np
import pytest

from birkhoff_lab import (
    CoboundaryCertificate,
    FieldValue,
    Observable,
    PeriodicOrbit,
    ViolatingCycle,
    admissible_words,
    arithmetic_test,
    average_spectrum_density,
    birkhoff_sum,
    classify_observable,
    coboundary_observable,
    cyclic_window_sum,
    density_probe,
    enumerate_primitive_orbits,
    equidist_witness,
    extremal_mean_cycle,
    find_beta,
    full_shift,
    glue_orbits,
    golden_mean_shift,
    hit_target,
    junction_correction,
    lattice_gap,
    pigeonhole_density,
    solve_coboundary,
    spectrum,
    spectrum_growth,
    validate_sft,
    verify_gluing_estimate,
)
from birkhoff_lab.debruijn import transfer_graph


def report(number: int, ok: bool, description: str):
    status = "PASS" if ok else "FAIL"
    print(f"ACCEPTANCE {number} {status}: {description}")
    assert ok, f"criterion {number} failed: {description}"


def random_exact_observable(sft, window, rng, lo=-8, hi=9):
    return Observable.validated(sft, window, {
        w: FieldValue(Fraction(rng.randrange(lo, hi), rng.randrange(1, 5)))
        for w in admissible_words(sft, window)})


@pytest.fixture(scope="module")
def systems():
    return {
        "full2": full_shift(2),
        "golden": golden_mean_shift(),
        "sft3": validate_sft(3, [[1, 1, 1], [1, 1, 1], [1, 1, 0]]),
    }


@pytest.fixture(scope="module")
def pair_sum_fx(systems):
    sft = systems["full2"]
    f = Observable.validated(sft, 2, {
        (0, 0): FieldValue(-1), (0, 1): FieldValue(0),
        (1, 0): FieldValue(0), (1, 1): FieldValue(1)})
    return sft, f


def test_criterion_1_worked_two_shift_fixture(pair_sum_fx):
    """Two-shift fixture reproduction, exact, under 10 seconds at n_max = 14."""
    sft, f = pair_sum_fx
    started = time.monotonic()

    ok = birkhoff_sum(PeriodicOrbit.canonical((0,), sft), f) == FieldValue(-1)
    ok &= birkhoff_sum(PeriodicOrbit.canonical((1,), sft), f) == FieldValue(1)

    rep14 = spectrum(sft, f, 14)
    for e in rep14.entries:
        ok &= e.sum == FieldValue(2 * sum(e.orbit.word) - e.orbit.period)

    cls = classify_observable(rep14)
    ok &= cls.kind == "dispersed"

    verdict = arithmetic_test(rep14)
    ok &= verdict.kind == "arithmetic" and verdict.c == FieldValue(1)

    ok &= isinstance(solve_coboundary(sft, f), ViolatingCycle)

    for n_max in range(1, 15):
        probe = density_probe(spectrum(sft, f, n_max), 0, 1, 4)
        ok &= all(c == 0 for c in probe.bins)

    elapsed = time.monotonic() - started
    ok &= elapsed < 10.0
    report(1, ok, f"two-shift fixture exact reproduction ({elapsed:.2f}s at n_max=14)")


def test_criterion_2_boundedness_dichotomy(systems):
    """50 randomized window-<=3 observables: certificates vs growth witnesses."""
    rng = random.Random(424242)
    sft_cycle = list(systems.values())
    ok = True

    for trial in range(25):  # constructed coboundaries
        sft = sft_cycle[trial % 3]
        window_u = 1 + trial % 2
        potential = {v: FieldValue(Fraction(rng.randrange(-9, 10), rng.randrange(1, 6)))
                     for v in admissible_words(sft, window_u)}
        f = coboundary_observable(sft, potential)
        result = solve_coboundary(sft, f)
        ok &= isinstance(result, CoboundaryCertificate)
        growth = spectrum_growth(spectrum(sft, f, 12))
        ok &= all(g == FieldValue(0) for _, g in growth)

    for trial in range(25):  # positive non-coboundaries with a dominant fixed window
        sft = sft_cycle[trial % 3]
        w = 1 + trial % 3
        table = {word: FieldValue(Fraction(rng.randrange(1, 9), rng.randrange(1, 5)))
                 for word in admissible_words(sft, w)}
        table[(0,) * w] = FieldValue(rng.randrange(40, 60))
        f = Observable.validated(sft, w, table)
        result = solve_coboundary(sft, f)
        ok &= isinstance(result, ViolatingCycle)
        if isinstance(result, ViolatingCycle):
            ok &= result.sum.sign() != 0
        series = dict(spectrum_growth(spectrum(sft, f, 12)))
        values = [series[p] for p in range(3, 13)]
        ok &= all(b > a for a, b in zip(values, values[1:]))

    report(2, ok, "boundedness dichotomy over 50 randomized observables, 3 shifts")


def brute_force_extreme_mean(sft, f, mode):
    graph = transfer_graph(sft, f.window, f)
    g = nx.DiGraph()
    weights = {}
    for e in graph.edges:
        g.add_edge(e.tail, e.head)
        weights[(e.tail, e.head)] = e.weight
    best = None
    for cycle in nx.simple_cycles(g):
        total = FieldValue(0)
        for u, v in zip(cycle, cycle[1:] + cycle[:1]):
            total = total + weights[(u, v)]
        mean = total / len(cycle)
        if best is None or (mean < best if mode == "min" else mean > best):
            best = mean
    return best


def test_criterion_3_interval_characterization(systems):
    """Extremal means match brute force; 6 average bins all hit; under 60 s."""
    started = time.monotonic()
    rng = random.Random(31337)
    ok = True

    cases = [("full2", w) for w in (1, 2, 3, 4)] \
        + [("golden", w) for w in (1, 2, 3, 4)] \
        + [("sft3", w) for w in (1, 2, 3)]
    for name, window in cases:
        sft = systems[name]
        assert len(transfer_graph(sft, window).vertices) <= 64
        f = random_exact_observable(sft, window, rng)
        for mode in ("min", "max"):
            got = extremal_mean_cycle(sft, f, mode)
            ok &= got.value == brute_force_extreme_mean(sft, f, mode)

    n = 64  # a sparse 64-vertex graph keeps the brute-force cycle count small
    matrix = [[0] * n for _ in range(n)]
    for i in range(n):
        matrix[i][(i + 1) % n] = 1
    matrix[0][32] = 1
    matrix[48][5] = 1
    big = validate_sft(n, matrix)
    f = Observable.validated(big, 1, {
        (s,): FieldValue(Fraction(rng.randrange(-9, 10), rng.randrange(1, 4)))
        for s in range(n)})
    for mode in ("min", "max"):
        ok &= extremal_mean_cycle(big, f, mode).value == \
            brute_force_extreme_mean(big, f, mode)

    full2 = systems["full2"]
    for trial in range(10):
        w = 1 + trial % 2
        table = {}
        for word in admissible_words(full2, w):
            sign = -1 if word[0] == 0 else 1
            table[word] = FieldValue(
                sign * Fraction(rng.randrange(2, 12), rng.randrange(1, 5)))
        f = random_fixture = Observable.validated(full2, w, table)
        ok &= classify_observable(spectrum(full2, f, 12)).kind == "dispersed"
        density = average_spectrum_density(full2, f, 12, 6)
        ok &= all(c > 0 for c in density.bins)

    elapsed = time.monotonic() - started
    ok &= elapsed < 60.0
    report(3, ok, f"interval characterization at desk scale ({elapsed:.1f}s)")


def test_criterion_4_number_theory_suite():
    """Lattice gaps vs brute force, pigeonhole bound, exact witnesses, beta post-checks."""
    ok = True
    rng = random.Random(12345)

    for _ in range(100):
        a = Fraction(rng.randrange(1, 40), rng.randrange(1, 12))
        b = Fraction(rng.randrange(1, 40), rng.randrange(1, 12))
        p, q = a.numerator, a.denominator
        r, s = b.numerator, b.denominator
        ks = np.arange(-200, 201, dtype=np.int64)
        grid = np.abs(np.add.outer(ks * (p * s), ks * (r * q)))
        brute = Fraction(int(grid[grid > 0].min()), q * s)
        ok &= lattice_gap(FieldValue(a), FieldValue(b)) == FieldValue(brute)

    for _ in range(30):
        m = rng.randrange(1, 6)
        n0 = rng.randrange(1, 30)
        N = n0 + rng.randrange(10, 200)
        sets = [set() for _ in range(m)]
        for x in range(n0, N + 1):
            sets[rng.randrange(m)].add(x)
        _, density = pigeonhole_density(sets, n0, N)
        ok &= density >= Fraction(1, m) - Fraction(n0 - 1, N)

    from birkhoff_lab.errors import NotFound
    hits = 0
    for _ in range(30):
        slope = FieldValue(Fraction(rng.randrange(-4, 5), rng.randrange(1, 4)),
                           Fraction(rng.randrange(1, 5), rng.randrange(1, 4)))
        theta = FieldValue(Fraction(rng.randrange(-6, 7), rng.randrange(1, 5)))
        gamma = Fraction(1, rng.randrange(1, 8))
        pool = sorted(rng.sample(range(0, 400), 60))
        try:
            n = equidist_witness(slope, theta, pool, gamma)
        except NotFound:
            continue
        hits += 1
        x = (slope * n + theta).frac()
        ok &= FieldValue(gamma / 4) <= x <= FieldValue(1 - gamma / 4)
    ok &= hits >= 25

    for _ in range(100):
        a = FieldValue(Fraction(rng.randrange(0, 8), rng.randrange(1, 5)),
                       Fraction(rng.randrange(1, 6), rng.randrange(1, 4)))
        b = FieldValue(Fraction(rng.randrange(1, 9), rng.randrange(1, 5)))
        c_list = []
        for _ in range(rng.randrange(1, 4)):
            c = FieldValue(Fraction(rng.randrange(0, 7), rng.randrange(1, 4)),
                           Fraction(rng.randrange(0, 3), rng.randrange(1, 3)))
            c_list.append(c if c.sign() > 0 else c + 1)
        beta = find_beta(a, b, c_list)
        ok &= 0 < beta < 1
        for c in c_list:
            ok &= ((a * beta + b) / c).irr != 0

    report(4, ok, "number-theory lemma suite, exact, brute-force checked")


def test_criterion_5_gluing_exactness(systems):
    """20 random (p, q, f, beta): zero residuals and grid-constant H; float bound."""
    rng = random.Random(2029)
    ok = True
    pool = [systems["full2"], systems["golden"],
            validate_sft(3, [[1, 0, 1], [1, 0, 0], [0, 1, 1]])]

    for trial in range(20):
        sft = pool[trial % 3]
        window = 1 + trial % 3
        f = random_exact_observable(sft, window, rng)
        orbits = enumerate_primitive_orbits(sft, 4)
        p, q = rng.sample(orbits, 2)
        beta = Fraction(rng.randrange(1, 4), rng.randrange(4, 8))

        m0 = max(1, -(-window // p.period))
        n0 = max(1, -(-window // q.period))
        corr = junction_correction(sft, f, p, q, m0, n0)
        bridges = corr.bridge_sums[0] + corr.bridge_sums[1]
        sp = cyclic_window_sum(p.word, f)
        sq = cyclic_window_sum(q.word, f)

        grid = {junction_correction(sft, f, p, q, m, n).value
                for m in range(m0, m0 + 5) for n in range(n0, n0 + 5)}
        ok &= len(grid) == 1

        # enter the stabilization regime: floor(beta n) >= m0 and n >= n0
        n_enter = max(n0, -(-m0 // beta) if beta else n0)
        start = max(2, int(n_enter) - 3)
        rows = verify_gluing_estimate(sft, f, p, q, beta,
                                      range(start, int(n_enter) + 8))
        stabilized = [r for r in rows if r.stabilized]
        ok &= len(stabilized) >= 4
        ok &= all(r.residual == FieldValue(0) for r in stabilized)
        for r in stabilized:
            glued = glue_orbits(sft, p, q, r.m, r.n)
            direct = cyclic_window_sum(glued.word, f)
            ok &= direct == sp * (2 * r.m) + sq * (2 * r.n) + bridges + corr.value

    full2 = systems["full2"]
    for trial in range(4):  # float-mode variant with the explicit junction bound
        table = {w: rng.uniform(-1, 1) for w in admissible_words(full2, 4)}
        f = Observable.validated(full2, 4, table, "float")
        orbits = enumerate_primitive_orbits(full2, 3)
        p, q = rng.sample(orbits, 2)
        rows = verify_gluing_estimate(full2, f, p, q, Fraction(1, 2), range(4, 13))
        stabilized = [r for r in rows if r.stabilized]
        ok &= bool(stabilized)
        ok &= all(r.ok and abs(r.residual) <= r.bound for r in stabilized)

    report(5, ok, "gluing estimate exact (20 fixtures) and float bound variant")


def test_criterion_6_target_hitting():
    """Concentrated fixture with 0 in the spectrum: hits at A in {1, 3, 10}."""
    sft = full_shift(2)
    f = Observable.validated(sft, 2, {
        (0, 0): FieldValue(0),
        (0, 1): FieldValue(Fraction(1, 200)),
        (1, 0): FieldValue(Fraction(1, 200)),
        (1, 1): FieldValue(Fraction(1, 4))})
    rep = spectrum(sft, f, 6)
    assert FieldValue(0) in rep.distinct_values  # 0 belongs to the spectrum
    assert classify_observable(rep).kind == "concentrated"

    eps = Fraction(1, 4)
    ok = True
    for target in (1, 3, 10):
        A = FieldValue(target)
        result = hit_target(sft, f, A, eps)
        ok &= A - 2 * eps < result.sum < A + 2 * eps
        ok &= A + Fraction(eps, 5) <= result.deterministic_part \
            < A + 2 * Fraction(eps, 5)
        ok &= cyclic_window_sum(result.glued.word, f) == result.sum
    report(6, ok, "target hitting with deterministic part in [A+eps/5, A+2eps/5)")


def test_criterion_7_shrinking_gaps():
    """Dispersed non-arithmetic fixtures: widest empty gap non-increasing in n_max."""
    sft = full_shift(2)
    fixtures = [
        Observable.validated(sft, 1, {(0,): FieldValue(1), (1,): FieldValue(0, -1)}),
        Observable.validated(sft, 1, {(0,): FieldValue(Fraction(1, 2), Fraction(1, 3)),
                                      (1,): FieldValue(-1)}),
        Observable.validated(sft, 2, {(0, 0): FieldValue(1), (0, 1): FieldValue(0, 1),
                                      (1, 0): FieldValue(0), (1, 1): FieldValue(-1)}),
    ]
    ok = True
    for f in fixtures:
        rep = spectrum(sft, f, 14)
        ok &= classify_observable(rep).kind == "dispersed"
        ok &= arithmetic_test(rep).kind == "non_arithmetic"
        widths = []
        for n_max in (8, 10, 12, 14):
            probe = density_probe(spectrum(sft, f, n_max), -2, 2, 4)
            widths.append(probe.largest_gap[2])
        ok &= all(b <= a for a, b in zip(widths, widths[1:]))
    report(7, ok, "density-gap monotonicity over n_max in {8, 10, 12, 14}")
