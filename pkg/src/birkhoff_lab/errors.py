"""Exception hierarchy shared by all modules.

InputError subclasses signal rejected inputs or violated preconditions
(CLI exit code 2).  BudgetExceeded and NotFound signal exhausted search
horizons (exit 3).  IrrationalRatio is contextual: a negative verdict for
lattice-gap queries, a precondition failure elsewhere.
"""


class BirkhoffLabError(Exception):
    """Base class for every error raised by this package."""


class InputError(BirkhoffLabError):
    """Invalid input or violated precondition."""


class NotStronglyConnected(InputError):
    def __init__(self, source: int, target: int):
        self.witness = (source, target)
        super().__init__(
            f"transition graph is not strongly connected: no path {source} -> {target}"
        )


class DeadSymbol(InputError):
    def __init__(self, index: int, kind: str):
        self.index = index
        self.kind = kind
        super().__init__(f"symbol {index} has no {kind}-edge")


class NotPrimitive(InputError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"word {word!r} is a proper power, not a primitive orbit")


class NonPositiveRoof(InputError):
    def __init__(self, word):
        self.word = word
        super().__init__(f"roof value at word {word!r} is not strictly positive")


class StabilizationNotReached(InputError):
    def __init__(self, detail: str):
        super().__init__(f"stabilization regime not reached: {detail}")


class ConfigError(InputError):
    """Malformed configuration document or CLI arguments."""


class BudgetExceeded(BirkhoffLabError):
    def __init__(self, budget, what: str = "output cap"):
        self.budget = budget
        super().__init__(f"{what} exhausted at {budget}")


class NotFound(BirkhoffLabError):
    """A witness search exhausted its finite horizon without a hit."""

    def __init__(self, horizon, detail: str = "no witness found"):
        self.horizon = horizon
        super().__init__(f"{detail} (scanned horizon: {horizon})")


class IrrationalRatio(BirkhoffLabError):
    """A ratio required (or tested) to be rational is irrational."""

    def __init__(self, index=None):
        self.index = index
        where = "" if index is None else f" at index {index}"
        super().__init__(f"ratio is irrational{where}; lattice infimum is 0")


class CoverageGap(InputError):
    def __init__(self, witness: int):
        self.witness = witness
        super().__init__(f"union of sets misses {witness} inside the required range")


class NoDistinctAverages(InputError):
    def __init__(self):
        super().__init__("report contains no pair of orbits with distinct averages")
