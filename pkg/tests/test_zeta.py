import math

import pytest

from tractlab.errors import DomainError
from tractlab.zeta import zeta, zeta_log_weighted

# Reference values computed once with mpmath at 50 digits and frozen here.
ZETA_REF = {
    1.1: 10.584448464950803,
    1.2: 5.591582441177751,
    1.3: 3.9319492118095436,
    2.0: 1.6449340668482264,
    3.0: 1.2020569031595943,
    4.0: 1.0823232337111381,
    10.0: 1.0009945751278182,
    50.0: 1.0000000000000009,
}

# -zeta'(s) = sum_{m>=2} ln(m) / m^s, same provenance.
ZETA_LOG_REF = {
    1.3: 11.041284605032113,
    2.0: 0.9375482543158438,
    3.0: 0.19812624288563685,
    4.0: 0.06891126589612538,
}


@pytest.mark.parametrize("s,want", sorted(ZETA_REF.items()))
def test_zeta_reference_values(s, want):
    assert zeta(s) == pytest.approx(want, rel=1e-13)


@pytest.mark.parametrize("s,want", sorted(ZETA_LOG_REF.items()))
def test_zeta_log_weighted_reference_values(s, want):
    assert zeta_log_weighted(s) == pytest.approx(want, rel=1e-12)


def test_zeta_monotone_decreasing_in_s():
    values = [zeta(s) for s in (1.05, 1.5, 2.0, 3.0, 6.0, 20.0)]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] > 1.0


def test_zeta_rejects_divergent_arguments():
    for s in (1.0, 0.5, 0.0, -2.0):
        with pytest.raises(DomainError):
            zeta(s)


def test_zeta_large_s_approaches_one():
    assert zeta(60.0) == pytest.approx(1.0, abs=1e-15)
    assert math.isfinite(zeta_log_weighted(60.0))
