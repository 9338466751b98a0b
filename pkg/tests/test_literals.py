import math

import numpy as np
import pytest

from limitlab import LiteralError, moment_summary, parse_distribution, parse_kernel


def test_laws_parse():
    r = parse_distribution("rademacher")
    assert np.array_equal(r.locs, [-1, 1]) and r.label == "rademacher"
    u = parse_distribution("uniform:-sqrt(3),sqrt(3)")
    assert u.support == (-math.sqrt(3), math.sqrt(3))
    assert parse_distribution("det:2.5").locs.tolist() == [2.5]
    a = parse_distribution("atoms:1:0.5,5:0.5")
    assert moment_summary(a).variance == 4.0
    t = parse_distribution("threepoint:-2,0.25,1,0.2,0.5,0.3")
    assert t.masses.tolist() == [0.2, 0.5, 0.3]
    assert parse_distribution("normal").kind == "analytic"
    assert parse_distribution("exp1").label == "exp1"


def test_probabilities_are_exact():
    # 0.1 + 0.2 + 0.7 is not 1 in binary floating point, but is as decimals
    assert parse_distribution("atoms:0:0.1,1:0.2,2:0.7").masses.sum() == pytest.approx(1.0)
    with pytest.raises(LiteralError, match="not exactly 1"):
        parse_distribution("atoms:0:0.1,1:0.2,2:0.69")


@pytest.mark.parametrize("text, column", [
    ("uniform:1,x", 11),
    ("uniform:2,1", 11),
    ("threepoint:1,2,3,0.5,0.5", 12),
    ("atoms:1:0.5,1:0.5", 7),
    ("atoms:1-0.5", 7),
    ("cauchy", 1),
    ("uniform", 1),
    ("rademacher:2", 11),
    ("", 1),
])
def test_errors_carry_columns(text, column):
    with pytest.raises(LiteralError) as info:
        parse_distribution(text)
    assert info.value.column == column
    assert f"column {column}" in str(info.value)


def test_kernels():
    K = parse_kernel("beta:3,0.5")
    assert (K.order, K.delta) == (3, 0.5) and K.literal == "beta:3,0.5"
    with pytest.raises(LiteralError) as info:
        parse_kernel("beta:4,1")
    assert info.value.column == 6
    with pytest.raises(LiteralError):
        parse_kernel("beta:2,-1")
    with pytest.raises(LiteralError):
        parse_kernel("gauss:1")


def test_literal_errors_are_value_errors():
    with pytest.raises(ValueError):
        parse_distribution("det:")
