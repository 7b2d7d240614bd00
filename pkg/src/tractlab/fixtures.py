"""Constructed eigenvalue families with known exact answers.

Two constructions drive most of the verification suite:

* uniform block: N(d) = floor(M^(ln_+ d / delta)) unit eigenvalues per
  dimension, everything else zero.  The exact complexity is
  ceil((1 - eps^2) * N) and the quasi-polynomial constant M_delta
  evaluates exactly to M, so both the engine and the criterion code can
  be checked against closed forms.
* doubly-exponential ordering: coordinate k contributes k unit
  eigenvalues when k = 2^(2^m) and is trivial otherwise.  The exact
  complexity stays <= d^2 for every eps, yet the linear-sum polynomial
  criterion grows ~ d / ln d; important and unimportant coordinates are
  deliberately interleaved so that per-coordinate masses are not
  monotone in k.
"""

from __future__ import annotations

import math

from .errors import DomainError
from .numutil import ln_plus
from .spectra import ExplicitSpectrum
from .tensor import ProductProblem


def uniform_block_size(d: int, big_m: float = 2.0, delta: float = 0.5) -> int:
    """N(d) = floor(M^(ln_+ d / delta))."""
    if d < 1:
        raise DomainError(f"d must be positive, got {d}")
    if big_m <= 1.0:
        raise DomainError(f"M must exceed 1, got {big_m}")
    if not 0.0 < delta < 1.0:
        raise DomainError(f"delta must be in (0, 1), got {delta}")
    return int(math.floor(big_m ** (ln_plus(float(d)) / delta)))


def uniform_block_problem(
    d: int, big_m: float = 2.0, delta: float = 0.5
) -> ProductProblem:
    """The N(d) unit eigenvalues realized as a single explicit coordinate.

    The construction is not a tensor product across d; the whole
    d-dependent spectrum lives in one coordinate, which is all the
    complexity engine needs.
    """
    n = uniform_block_size(d, big_m, delta)
    return ProductProblem((ExplicitSpectrum((1.0,) * n),))


def uniform_block_complexity(
    epsilon: float, d: int, big_m: float = 2.0, delta: float = 0.5
) -> int:
    """Closed form ceil((1 - eps^2) * N(d))."""
    if not 0.0 < epsilon <= 1.0:
        raise DomainError(f"epsilon must be in (0, 1], got {epsilon}")
    n = uniform_block_size(d, big_m, delta)
    return int(math.ceil((1.0 - epsilon * epsilon) * n))


def is_tower_index(k: int) -> bool:
    """True when k = 2^(2^m) for a non-negative integer m."""
    if k < 2:
        return False
    t = 2
    while t < k:
        t = t * t
    return t == k


def tower_spectrum(k: int) -> ExplicitSpectrum:
    """Coordinate k of the doubly-exponential ordering family."""
    if k < 1:
        raise DomainError(f"coordinate index must be >= 1, got {k}")
    ones = k if is_tower_index(k) else 1
    return ExplicitSpectrum((1.0,) * ones)


def tower_problem(d: int) -> ProductProblem:
    if d < 1:
        raise DomainError(f"d must be positive, got {d}")
    return ProductProblem(tuple(tower_spectrum(k) for k in range(1, d + 1)))


def tower_complexity_cap(d: int) -> int:
    """The product of active block sizes; always <= d^2.

    Every nonzero d-variate eigenvalue equals 1, so the complexity at any
    eps < 1 is at most the number of nonzero eigenvalues, which is the
    product of k over tower indices k <= d.
    """
    cap = 1
    k = 2
    while k <= d:
        cap *= k
        k = k * k
    return cap
