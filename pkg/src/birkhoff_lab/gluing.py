"""Exact orbit gluing: concatenated words, the junction correction H, and targeting.

In a subshift, a periodic pseudo-orbit built from blocks of two orbits is
shadowed by the concatenated word itself, with zero error.  For a window-w
observable the glued sum therefore satisfies

    S(z) = 2m*S(p) + 2n*S(q) + bridges + H

exactly once each block is at least a window long.  H collects the finitely
many junction windows that differ from their block's periodic continuation;
its four components are attributed to the two junctions (entering and
leaving each bridge).  Float mode keeps the same combinatorics and checks
|S(z) - linear part - bridges| against the explicit Hoelder junction bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .core import (
    BiInfiniteWord,
    FieldValue,
    Observable,
    PeriodicOrbit,
    Sft,
    Word,
    cylinder_distance,
    primitive_root,
)
from .errors import BudgetExceeded, InputError, NotFound, StabilizationNotReached
from .orbits import cyclic_window_sum, enumerate_primitive_orbits

HOLDER_EXPONENT = 1.0  # window-w tables are Lipschitz for the cylinder metric
CONTRACTION = 0.5  # one shift halves the distance of sequences sharing a tail


def bridge_words(sft: Sft, from_orbit: PeriodicOrbit, to_orbit: PeriodicOrbit,
                 max_len: int | None = None) -> Word:
    """Shortest word making last(from) -> bridge -> first(to) admissible.

    Empty when the direct transition is allowed.  Strong connectivity
    guarantees a bridge shorter than the alphabet; the cap is defensive.
    """
    src = from_orbit.word[-1]
    dst = to_orbit.word[0]
    if sft.allowed(src, dst):
        return ()
    cap = sft.alphabet_size if max_len is None else max_len
    prev: dict[int, tuple[int, int]] = {}
    frontier = [src]
    seen = {src}
    for _ in range(cap + 1):
        nxt = []
        for u in frontier:
            for v in sft.followers(u):
                if v in seen:
                    continue
                seen.add(v)
                prev[v] = (u, v)
                if v == dst:
                    path = []
                    w = v
                    while w != src:
                        path.append(w)
                        w = prev[w][0]
                    path.reverse()
                    return tuple(path[:-1])  # interior symbols only
                nxt.append(v)
        frontier = nxt
    raise BudgetExceeded(cap, "bridge search")


@dataclass(frozen=True)
class GluedOrbit:
    p: PeriodicOrbit
    q: PeriodicOrbit
    bridges: tuple[Word, Word]  # (p -> q, q -> p)
    m: int
    n: int
    word: Word  # p^m B1 q^(2n) B2 p^m, read cyclically
    primitive: bool

    @property
    def total_period(self) -> int:
        return len(self.word)

    def orbit(self) -> PeriodicOrbit:
        root, k = primitive_root(self.word)
        return PeriodicOrbit(min(root[i:] + root[:i] for i in range(len(root))))


def glue_orbits(sft: Sft, p: PeriodicOrbit, q: PeriodicOrbit, m: int, n: int) -> GluedOrbit:
    """The periodic word realizing the four-segment pseudo-orbit exactly."""
    if p.word == q.word:
        raise InputError("gluing requires two distinct necklaces")
    if m < 1 or n < 1:
        raise InputError("need m, n >= 1")
    b1 = bridge_words(sft, p, q)
    b2 = bridge_words(sft, q, p)
    word = p.word * m + b1 + q.word * (2 * n) + b2 + p.word * m
    assert sft.word_admissible(word, cyclic=True), "glued word must be admissible"
    _, k = primitive_root(word)
    return GluedOrbit(p, q, (b1, b2), m, n, word, primitive=(k == 1))


@dataclass(frozen=True)
class CorrectionTerm:
    value: object  # FieldValue, or float in float mode
    breakdown: dict  # H1..H4 attributed to the two junctions
    bridge_sums: tuple  # (bridge p->q, bridge q->p) window sums
    mode: str
    err: float | None = None  # float mode: rounding budget
    holder_bound: float | None = None  # float mode: junction bound from the F constants
    distances: dict | None = None


def _window(seq, pos: int, w: int) -> Word:
    return tuple(seq[pos + t] for t in range(w))


def _junction_series(f: Observable, glued_side, reference, offsets):
    w = f.window
    if f.is_exact:
        total = FieldValue(0)
        for j in offsets:
            total = total + f.value(_window(glued_side, j, w)) \
                - f.value(_window(reference, j, w))
        return total
    return math.fsum(
        f.value(_window(glued_side, j, w)) - f.value(_window(reference, j, w))
        for j in offsets
    )


def _f_constant(c: float, tau: int) -> float:
    lam = CONTRACTION ** HOLDER_EXPONENT
    geom = (lam ** tau) * (1 - lam ** (tau * tau)) / (1 - lam ** tau)
    return c / (1 - lam) * geom


def _f_constant_full(c: float, tau: int) -> float:
    lam = CONTRACTION ** HOLDER_EXPONENT
    geom = (1 - lam ** (tau * tau)) / (1 - lam ** tau)
    return c / (1 - lam) * geom


def junction_correction(sft: Sft, f: Observable, p: PeriodicOrbit, q: PeriodicOrbit,
                        m: int, n: int) -> CorrectionTerm:
    """The exact junction correction H = H1 + H2 + H3 + H4 with its breakdown.

    For a window-w table the infinite comparison series truncate: every term
    whose window stays inside one block vanishes, so H is a finite sum of
    junction-window differences and is constant throughout the
    stabilization regime m*tau_p >= w, n*tau_q >= w.
    """
    w = f.window
    if m * p.period < w or n * q.period < w:
        raise StabilizationNotReached(
            f"need m*tau_p >= {w} and n*tau_q >= {w}, got {m * p.period}, {n * q.period}")

    b1 = bridge_words(sft, p, q)
    b2 = bridge_words(sft, q, p)
    # y models the junction ...ppp B1 qqq..., x the junction ...qqq B2 ppp...
    y = BiInfiniteWord(p.word, b1, q.word)
    x = BiInfiniteWord(q.word, b2, p.word)
    p_inf = BiInfiniteWord.constant(p.word)
    q_inf = BiInfiniteWord.constant(q.word)

    back = range(-(w - 1), 0)  # windows straddling out of a block
    ahead = range(0, w)  # windows opening into the next block

    h1 = _junction_series(f, y, p_inf, back)
    h2 = _junction_series(f, y.shift(len(b1)), q_inf, ahead)
    h3 = _junction_series(f, x, q_inf, back)
    h4 = _junction_series(f, x.shift(len(b2)), p_inf, ahead)

    if f.is_exact:
        bridge1 = FieldValue(0)
        for k in range(len(b1)):
            bridge1 = bridge1 + f.value(_window(y, k, w))
        bridge2 = FieldValue(0)
        for k in range(len(b2)):
            bridge2 = bridge2 + f.value(_window(x, k, w))
        total = h1 + h2 + h3 + h4
        return CorrectionTerm(total, {"H1": h1, "H2": h2, "H3": h3, "H4": h4},
                              (bridge1, bridge2), "exact")

    bridge1 = math.fsum(f.value(_window(y, k, w)) for k in range(len(b1)))
    bridge2 = math.fsum(f.value(_window(x, k, w)) for k in range(len(b2)))
    total = math.fsum((h1, h2, h3, h4))
    err = 8.0 * (abs(total) + 1.0) * 2.0 ** -52

    c = f.lipschitz_constant()
    radius = 4 * max(w, p.period, q.period, len(b1) + 1, len(b2) + 1) + 16
    d_yp = float(cylinder_distance(y, p_inf, radius).upper_bound())
    d_yq = float(cylinder_distance(y.shift(len(b1)), q_inf, radius).upper_bound())
    d_xq = float(cylinder_distance(x, q_inf, radius).upper_bound())
    d_xp = float(cylinder_distance(x.shift(len(b2)), p_inf, radius).upper_bound())
    gamma = (_f_constant(c, p.period) + _f_constant_full(c, q.period)
             + _f_constant(c, q.period) + _f_constant_full(c, p.period))
    bound = gamma * max(d_yp, d_yq, d_xq, d_xp) ** HOLDER_EXPONENT
    return CorrectionTerm(total, {"H1": h1, "H2": h2, "H3": h3, "H4": h4},
                          (bridge1, bridge2), "float", err=err,
                          holder_bound=bound,
                          distances={"d_yp": d_yp, "d_yq": d_yq,
                                     "d_xq": d_xq, "d_xp": d_xp})


@dataclass(frozen=True)
class GluingRow:
    n: int
    m: int
    sum: object
    predicted: object
    residual: object
    stabilized: bool
    ok: bool
    bound: float | None = None


def verify_gluing_estimate(sft: Sft, f: Observable, p: PeriodicOrbit, q: PeriodicOrbit,
                           beta, n_range) -> list[GluingRow]:
    """Tabulate S(z(n)) against the linear-plus-correction prediction, m = floor(beta n).

    Exact mode asserts a zero residual once both blocks exceed the window
    (the sharpened, epsilon-free form of the gluing estimate) and reports
    the pre-stabilization residuals as the decay analogue.  Float mode
    checks the residual without H against the explicit junction bound.
    """
    beta = Fraction(beta)
    w = f.window
    m_stab = max(1, -(-w // p.period))
    n_stab = max(1, -(-w // q.period))
    correction = junction_correction(sft, f, p, q, m_stab, n_stab)
    bridge_total = correction.bridge_sums[0] + correction.bridge_sums[1]

    rows = []
    for n in n_range:
        m = math.floor(beta * n)
        if m < 1 or n < 1:
            continue
        glued = glue_orbits(sft, p, q, m, n)
        s = cyclic_window_sum(glued.word, f)
        sp = cyclic_window_sum(p.word, f)
        sq = cyclic_window_sum(q.word, f)
        stabilized = m * p.period >= w and n * q.period >= w
        if f.is_exact:
            predicted = sp * (2 * m) + sq * (2 * n) + bridge_total + correction.value
            residual = s - predicted
            ok = residual.sign() == 0
            if stabilized:
                assert ok, "stabilized exact residual must vanish"
            rows.append(GluingRow(n, m, s, predicted, residual, stabilized, ok))
        else:
            predicted = math.fsum((2 * m * sp, 2 * n * sq, bridge_total))
            residual = s - predicted
            slack = correction.err + abs(predicted) * 2.0 ** -50
            ok = abs(residual) <= correction.holder_bound + slack
            rows.append(GluingRow(n, m, s, predicted, residual, stabilized, ok,
                                  bound=correction.holder_bound))
    return rows


@dataclass(frozen=True)
class HitResult:
    glued: GluedOrbit
    orbit: PeriodicOrbit
    sum: FieldValue
    deterministic_part: FieldValue
    p: PeriodicOrbit
    q: PeriodicOrbit
    m: int
    n: int


def hit_target(sft: Sft, f: Observable, A: FieldValue, eps,
               horizon: int = 16) -> HitResult:
    """Glue small-sum orbits to land the total inside (A - 2 eps, A + 2 eps).

    Searches the spectrum up to the horizon for orbits with sums in
    (0, eps/10), sets n = floor(A / (2 S(q))) and picks m so that the
    deterministic part 2m S(p) + 2n S(q) falls in [A + eps/5, A + 2 eps/5),
    asserted exactly; the final inclusion is checked on the exact glued sum.
    Requires a concentrated-positive spectrum at the horizon.
    """
    if not f.is_exact:
        raise InputError("hit_target requires an exact-mode observable")
    if not isinstance(A, FieldValue):
        A = FieldValue(A)
    if A.sign() <= 0:
        raise InputError("target A must be > 0")
    eps = Fraction(eps)
    if eps <= 0:
        raise InputError("eps must be > 0")

    orbits = enumerate_primitive_orbits(sft, horizon)
    sums = {o: cyclic_window_sum(o.word, f) for o in orbits}
    if any(s.sign() < 0 for s in sums.values()):
        raise InputError("spectrum is not concentrated positive at this horizon")

    small = [o for o in orbits if sums[o].sign() > 0 and sums[o] < Fraction(eps, 10)]
    lo_shift = Fraction(eps, 5)
    w = f.window

    for q in small:
        sq = sums[q]
        n = math.floor(A / (sq * 2))
        if n < 1 or n * q.period < w:
            continue
        r = A - sq * (2 * n)
        for p in small:
            if p.word == q.word:
                continue
            sp = sums[p]
            target_lo = lo_shift + r  # need 2 m S(p) in [target_lo, target_lo + eps/5)
            m = math.floor(target_lo / (sp * 2))
            if sp * (2 * m) < target_lo:
                m += 1
            while sp * (2 * m) < target_lo + lo_shift:
                if m >= 1 and m * p.period >= w:
                    det = sp * (2 * m) + sq * (2 * n)
                    assert A + lo_shift <= det < A + 2 * lo_shift
                    glued = glue_orbits(sft, p, q, m, n)
                    total = cyclic_window_sum(glued.word, f)
                    if A - 2 * eps < total < A + 2 * eps and glued.primitive:
                        return HitResult(glued, glued.orbit(), total, det,
                                         p, q, m, n)
                m += 1
    raise NotFound(horizon, "no admissible gluing hit the target window")
