"""Exact values in Q(sqrt(D)), shift spaces, observables, and the cylinder metric.

Every value handled by this package is an element rat + irr*sqrt(D) of a real
quadratic field with a configurable square-free D (default 2).  Signs,
comparisons, floors and rationality of ratios are all decided exactly, so the
dichotomies tested downstream (arithmetic vs not, coboundary vs not) never
depend on floating point.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterator, Mapping, NamedTuple, Union

from .errors import (
    ConfigError,
    DeadSymbol,
    InputError,
    NonPositiveRoof,
    NotPrimitive,
    NotStronglyConnected,
)

DEFAULT_ALPHA_SQUARE = 2

RationalLike = Union[int, Fraction]

_ZERO = Fraction(0)

_SQUARE_FREE_OK: set[int] = set()


def _check_alpha_square(d: int) -> int:
    if d in _SQUARE_FREE_OK:
        return d
    if d < 2:
        raise InputError(f"alpha_square must be an integer >= 2, got {d}")
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            raise InputError(f"alpha_square must be square-free, got {d}")
        k += 1
    _SQUARE_FREE_OK.add(d)
    return d


@total_ordering
class FieldValue:
    """An exact element rat + irr*sqrt(d) of Q(sqrt(d)).

    Pure rationals compare equal regardless of the radical they were tagged
    with; mixing two different radicals with nonzero irrational parts is an
    error.  The sign of rat + irr*sqrt(d) is decided by one exact squaring,
    never by floating point.
    """

    __slots__ = ("rat", "irr", "d")

    def __init__(self, rat: RationalLike = 0, irr: RationalLike = 0,
                 d: int = DEFAULT_ALPHA_SQUARE):
        object.__setattr__(self, "rat", rat if type(rat) is Fraction else Fraction(rat))
        object.__setattr__(self, "irr", irr if type(irr) is Fraction else Fraction(irr))
        object.__setattr__(self, "d", _check_alpha_square(d))

    def __setattr__(self, name, value):
        raise AttributeError("FieldValue is immutable")

    @classmethod
    def _raw(cls, rat: Fraction, irr: Fraction, d: int) -> "FieldValue":
        # internal fast path: arguments are known-good Fractions, d validated
        obj = object.__new__(cls)
        object.__setattr__(obj, "rat", rat)
        object.__setattr__(obj, "irr", irr)
        object.__setattr__(obj, "d", d)
        return obj

    # -- coercion ---------------------------------------------------------

    def _coerce(self, other) -> "FieldValue | None":
        if isinstance(other, FieldValue):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldValue._raw(Fraction(other), _ZERO, self.d)
        return None

    def _join_d(self, other: "FieldValue") -> int:
        if self.irr and other.irr and self.d != other.d:
            raise InputError(
                f"cannot mix values over sqrt({self.d}) and sqrt({other.d})"
            )
        if self.irr:
            return self.d
        return other.d if other.irr else self.d

    # -- ring/field operations --------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldValue._raw(self.rat + o.rat, self.irr + o.irr, self._join_d(o))

    __radd__ = __add__

    def __neg__(self):
        return FieldValue._raw(-self.rat, -self.irr, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return FieldValue._raw(self.rat - o.rat, self.irr - o.irr, self._join_d(o))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = self._join_d(o)
        return FieldValue._raw(
            self.rat * o.rat + self.irr * o.irr * d,
            self.rat * o.irr + self.irr * o.rat,
            d,
        )

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.sign() == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        d = self._join_d(o)
        # multiply by the conjugate; the norm is a nonzero rational
        norm = o.rat * o.rat - o.irr * o.irr * d
        num = self * FieldValue._raw(o.rat, -o.irr, d)
        return FieldValue._raw(num.rat / norm, num.irr / norm, d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- exact decisions ----------------------------------------------------

    def sign(self) -> int:
        r, s = self.rat, self.irr
        if s == 0:
            return (r > 0) - (r < 0)
        if r == 0:
            return 1 if s > 0 else -1
        if (r > 0) == (s > 0):
            return 1 if r > 0 else -1
        lhs, rhs = r * r, s * s * self.d
        assert lhs != rhs, "sqrt(d) cannot be rational for square-free d"
        if r > 0:  # s < 0
            return 1 if lhs > rhs else -1
        return 1 if lhs < rhs else -1

    @property
    def is_rational(self) -> bool:
        return self.irr == 0

    def _key(self):
        return (self.rat, self.irr, self.d if self.irr else 0)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._key() == o._key() or (self - o).sign() == 0

    def __lt__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).sign() < 0

    def __hash__(self):
        return hash(self._key())

    def __bool__(self):
        return self.sign() != 0

    def __float__(self):
        return float(self.rat) + float(self.irr) * math.sqrt(self.d)

    def __floor__(self) -> int:
        if self.irr == 0:
            return math.floor(self.rat)
        t = math.floor(float(self))  # hint only; corrected exactly below
        while (self - t).sign() < 0:
            t -= 1
        while (self - (t + 1)).sign() >= 0:
            t += 1
        return t

    def frac(self) -> "FieldValue":
        """Fractional part, an exact value in [0, 1)."""
        return self - math.floor(self)

    # -- formatting ---------------------------------------------------------

    def to_token(self) -> str:
        r, i = self.rat, self.irr
        sign = "+" if i >= 0 else "-"
        return f"{r.numerator}/{r.denominator}{sign}{abs(i.numerator)}/{i.denominator}*a"

    def __repr__(self):
        return f"FieldValue({self.rat!r}, {self.irr!r}, d={self.d})"

    def __str__(self):
        return self.to_token()


_FULL_RE = re.compile(r"^\s*(-?\d+)/(\d+)\s*([+-])\s*(\d+)/(\d+)\s*\*\s*a\s*$")
_RAT_RE = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*$")
_IRR_RE = re.compile(r"^\s*(-?\d+)(?:/(\d+))?\s*\*\s*a\s*$")


def parse_field_value(text: str, alpha_square: int = DEFAULT_ALPHA_SQUARE) -> FieldValue:
    """Parse the exact token form "p/q+r/s*a" (or "p/q", "r/s*a")."""
    m = _FULL_RE.match(text)
    if m:
        rat = Fraction(int(m.group(1)), int(m.group(2)))
        irr = Fraction(int(m.group(4)), int(m.group(5)))
        if m.group(3) == "-":
            irr = -irr
        return FieldValue(rat, irr, alpha_square)
    m = _RAT_RE.match(text)
    if m:
        return FieldValue(Fraction(int(m.group(1)), int(m.group(2) or 1)), 0, alpha_square)
    m = _IRR_RE.match(text)
    if m:
        return FieldValue(0, Fraction(int(m.group(1)), int(m.group(2) or 1)), alpha_square)
    raise ConfigError(f"cannot parse field value token {text!r}")


def ratio_is_rational(x: FieldValue, y: FieldValue):
    """Decide exactly whether x = (l/k) * y, returning (True, Fraction) or (False, None)."""
    if y.sign() == 0:
        raise ZeroDivisionError("ratio against zero")
    q = x / y
    if q.irr == 0:
        return True, q.rat
    return False, None


# ---------------------------------------------------------------------------
# Shift spaces
# ---------------------------------------------------------------------------

Word = tuple[int, ...]


@dataclass(frozen=True)
class Sft:
    """A subshift of finite type: alphabet plus 0/1 transition matrix.

    Instances produced by validate_sft are strongly connected and free of
    dead symbols, matching the standing transitivity hypothesis.
    """

    alphabet_size: int
    transitions: tuple[tuple[int, ...], ...]

    def allowed(self, i: int, j: int) -> bool:
        return self.transitions[i][j] == 1

    def followers(self, i: int) -> tuple[int, ...]:
        return tuple(j for j in range(self.alphabet_size) if self.transitions[i][j])

    def word_admissible(self, word: Word, cyclic: bool = False) -> bool:
        for a, b in zip(word, word[1:]):
            if not self.allowed(a, b):
                return False
        if cyclic and len(word) >= 1 and not self.allowed(word[-1], word[0]):
            return False
        return True


def _reachable(n: int, edges, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in edges(u):
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def validate_sft(alphabet_size: int, transitions) -> Sft:
    """Check the basic-set hypotheses and return a validated Sft.

    Raises NotStronglyConnected with a witness pair, or DeadSymbol, naming
    the failed invariant.
    """
    n = alphabet_size
    if n < 1:
        raise InputError(f"alphabet_size must be >= 1, got {n}")
    rows = [tuple(int(x) for x in row) for row in transitions]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InputError(f"transition matrix must be {n}x{n}")
    for row in rows:
        for x in row:
            if x not in (0, 1):
                raise InputError("transition entries must be 0 or 1")
    matrix = tuple(rows)

    fwd = lambda u: (v for v in range(n) if matrix[u][v])
    bwd = lambda u: (v for v in range(n) if matrix[v][u])
    reach = _reachable(n, fwd, 0)
    if len(reach) != n:
        missing = min(set(range(n)) - reach)
        raise NotStronglyConnected(0, missing)
    coreach = _reachable(n, bwd, 0)
    if len(coreach) != n:
        missing = min(set(range(n)) - coreach)
        raise NotStronglyConnected(missing, 0)

    for i in range(n):
        if not any(matrix[i][j] for j in range(n)):
            raise DeadSymbol(i, "out")
        if not any(matrix[j][i] for j in range(n)):
            raise DeadSymbol(i, "in")

    return Sft(n, matrix)


def full_shift(n: int) -> Sft:
    return validate_sft(n, [[1] * n for _ in range(n)])


def golden_mean_shift() -> Sft:
    """The two-symbol shift forbidding the factor 11."""
    return validate_sft(2, [[1, 1], [1, 0]])


def admissible_words(sft: Sft, length: int) -> Iterator[Word]:
    """All admissible words of the given length, in lexicographic order."""
    if length == 0:
        yield ()
        return

    def extend(prefix: Word):
        if len(prefix) == length:
            yield prefix
            return
        for c in range(sft.alphabet_size):
            if not prefix or sft.allowed(prefix[-1], c):
                yield from extend(prefix + (c,))

    yield from extend(())


# ---------------------------------------------------------------------------
# Observables and roofs
# ---------------------------------------------------------------------------


class Observable:
    """A locally constant function given by a window-w word -> value table.

    In exact mode values are FieldValues and every downstream Birkhoff sum
    is exact.  In float mode values are binary floats and sums carry an
    explicit rounding budget.
    """

    __slots__ = ("window", "table", "mode")

    def __init__(self, window: int, table: Mapping[Word, object], mode: str = "exact"):
        if window < 1:
            raise InputError(f"window must be >= 1, got {window}")
        if mode not in ("exact", "float"):
            raise InputError(f"mode must be 'exact' or 'float', got {mode!r}")
        self.window = window
        self.table = dict(table)
        self.mode = mode

    @classmethod
    def validated(cls, sft: Sft, window: int, table: Mapping[Word, object],
                  mode: str = "exact") -> "Observable":
        """Build an observable whose table is total on admissible windows."""
        obs = cls(window, table, mode)
        required = set(admissible_words(sft, window))
        keys = set(obs.table)
        missing = required - keys
        if missing:
            raise InputError(f"table misses admissible word {min(missing)}")
        extra = keys - required
        if extra:
            raise InputError(f"table has inadmissible word {min(extra)}")
        if mode == "exact":
            for k, v in obs.table.items():
                if not isinstance(v, FieldValue):
                    obs.table[k] = FieldValue(v)
        else:
            for k, v in obs.table.items():
                obs.table[k] = float(v)
        return obs

    @property
    def is_exact(self) -> bool:
        return self.mode == "exact"

    def value(self, word: Word):
        return self.table[word]

    def spread(self):
        """Max minus min of the table, the raw oscillation of the function."""
        vals = list(self.table.values())
        return max(vals) - min(vals)

    def lipschitz_constant(self) -> float:
        """A Lipschitz constant for the cylinder metric: 2^w times the spread."""
        return float(2 ** self.window) * float(self.spread())

    def minus(self, c) -> "Observable":
        if not self.is_exact:
            raise InputError("constant shift requires an exact-mode observable")
        shift = c if isinstance(c, FieldValue) else FieldValue(c)
        return Observable(self.window,
                          {k: v - shift for k, v in self.table.items()},
                          "exact")

    def scaled(self, c) -> "Observable":
        if not self.is_exact:
            raise InputError("scaling requires an exact-mode observable")
        factor = c if isinstance(c, FieldValue) else FieldValue(c)
        return Observable(self.window,
                          {k: v * factor for k, v in self.table.items()},
                          "exact")


class Roof:
    """A strictly positive exact table over admissible windows (suspension roof)."""

    __slots__ = ("window", "table")

    def __init__(self, window: int, table: Mapping[Word, FieldValue]):
        if window < 1:
            raise InputError(f"window must be >= 1, got {window}")
        self.window = window
        self.table = {}
        for k, v in table.items():
            fv = v if isinstance(v, FieldValue) else FieldValue(v)
            if fv.sign() <= 0:
                raise NonPositiveRoof(k)
            self.table[k] = fv

    @classmethod
    def validated(cls, sft: Sft, window: int, table) -> "Roof":
        roof = cls(window, table)
        required = set(admissible_words(sft, window))
        if set(roof.table) != required:
            raise InputError("roof table must be total on admissible windows")
        return roof

    def value(self, word: Word) -> FieldValue:
        return self.table[word]

    def as_observable(self) -> Observable:
        return Observable(self.window, dict(self.table), "exact")


# ---------------------------------------------------------------------------
# Periodic orbits
# ---------------------------------------------------------------------------


def min_rotation(word: Word) -> Word:
    return min(word[i:] + word[:i] for i in range(len(word)))


def primitive_root(word: Word) -> tuple[Word, int]:
    """Return (root, k) with word == root * k and root primitive."""
    n = len(word)
    for d in range(1, n + 1):
        if n % d == 0 and word[:d] * (n // d) == word:
            return word[:d], n // d
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class PeriodicOrbit:
    """A primitive admissible cyclic word in its lexicographically minimal rotation."""

    word: Word
    admissible: bool = True

    @property
    def period(self) -> int:
        return len(self.word)

    @property
    def word_str(self) -> str:
        if all(s <= 9 for s in self.word):
            return "".join(str(s) for s in self.word)
        return ".".join(str(s) for s in self.word)

    def __str__(self):
        return self.word_str

    @staticmethod
    def canonical(word, sft: Sft | None = None) -> "PeriodicOrbit":
        w = tuple(int(s) for s in word)
        if not w:
            raise InputError("orbit word must be nonempty")
        root, k = primitive_root(w)
        if k != 1:
            raise NotPrimitive(w)
        canon = min_rotation(root)
        admissible = True if sft is None else sft.word_admissible(canon, cyclic=True)
        return PeriodicOrbit(canon, admissible)


def parse_word(text: str) -> Word:
    if "." in text:
        return tuple(int(p) for p in text.split("."))
    return tuple(int(ch) for ch in text)


# ---------------------------------------------------------------------------
# Eventually periodic bi-infinite sequences and the cylinder metric
# ---------------------------------------------------------------------------


class BiInfiniteWord:
    """A bi-infinite sequence with periodic past, finite middle, periodic future.

    Index convention: the middle occupies positions 0 .. len(middle)-1, the
    past repeats leftward with past[-1] at position -1, and the future
    repeats rightward starting at position len(middle).
    """

    __slots__ = ("past", "middle", "future")

    def __init__(self, past, middle=(), future=None):
        self.past = tuple(past)
        self.middle = tuple(middle)
        self.future = self.past if future is None else tuple(future)
        if not self.past or not self.future:
            raise InputError("past and future tails must be nonempty")

    @classmethod
    def constant(cls, word) -> "BiInfiniteWord":
        """The periodic point ...www|www... aligned so position 0 starts the word."""
        w = tuple(word)
        return cls(w, (), w)

    def __getitem__(self, k: int) -> int:
        mid = len(self.middle)
        if 0 <= k < mid:
            return self.middle[k]
        if k >= mid:
            return self.future[(k - mid) % len(self.future)]
        return self.past[k % len(self.past)]

    def shift(self, offset: int) -> "_ShiftedWord":
        return _ShiftedWord(self, offset)


class _ShiftedWord:
    __slots__ = ("base", "offset")

    def __init__(self, base, offset: int):
        self.base = base
        self.offset = offset

    def __getitem__(self, k: int) -> int:
        return self.base[k + self.offset]


class CylinderDistance(NamedTuple):
    partial_sum: Fraction
    tail_bound: Fraction

    def upper_bound(self) -> Fraction:
        return self.partial_sum + self.tail_bound


def cylinder_distance(x, y, radius: int) -> CylinderDistance:
    """Partial sum of sum_k 2^-|k| |x_k - y_k| over |k| <= radius, plus a tail bound.

    The tail bound 4 * 2^-radius covers everything outside the window.
    """
    if radius < 0:
        raise InputError("radius must be >= 0")
    total = Fraction(0)
    for k in range(-radius, radius + 1):
        diff = abs(x[k] - y[k])
        if diff:
            total += Fraction(diff, 2 ** abs(k))
    return CylinderDistance(total, Fraction(4, 2 ** radius))
