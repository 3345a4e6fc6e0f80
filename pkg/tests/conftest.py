from fractions import Fraction

import pytest

from birkhoff_lab import (
    FieldValue,
    Observable,
    full_shift,
    golden_mean_shift,
    validate_sft,
)


@pytest.fixture(scope="session")
def full2():
    return full_shift(2)


@pytest.fixture(scope="session")
def golden():
    return golden_mean_shift()


@pytest.fixture(scope="session")
def sft3():
    # three symbols, everything allowed except 2 -> 2
    return validate_sft(3, [[1, 1, 1], [1, 1, 1], [1, 1, 0]])


@pytest.fixture(scope="session")
def sft_bridge():
    # 2 -> 0 is forbidden, so gluing ...2 -> 0... needs the bridge symbol 1
    return validate_sft(3, [[1, 0, 1], [1, 0, 0], [0, 1, 1]])


@pytest.fixture(scope="session")
def pair_sum(full2):
    """The worked two-shift observable f(x) = x0 + x1 - 1 as a window-2 table."""
    return Observable.validated(full2, 2, {
        (0, 0): FieldValue(-1),
        (0, 1): FieldValue(0),
        (1, 0): FieldValue(0),
        (1, 1): FieldValue(1),
    })


def fv(rat, irr=0, d=2):
    return FieldValue(Fraction(rat), Fraction(irr), d)


@pytest.fixture(scope="session")
def make_fv():
    return fv
