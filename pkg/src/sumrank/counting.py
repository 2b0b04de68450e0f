"""Exact counting formulas for subspaces, fixed-rank matrices, and the
probability that a random rank-t matrix attains maximal sum-rank weight.

Everything here is arbitrary-precision integer or rational arithmetic; q is
taken as a plain validated prime power and no field arithmetic is ever
constructed.  The central quantity is

    Q_t(x) = (x - 1)(x - q)(x - q^2) ... (x - q^(t-1)),

evaluated at powers x = q^r: Q_t(q^r) counts ordered t-tuples of linearly
independent vectors in a space of q^r elements.
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction
from math import prod

from .errors import InvalidDimension
from .matrix import OrderedPartition

__all__ = [
    "Scenario",
    "q_pochhammer_Q",
    "gaussian_binomial",
    "count_fixed_colspace",
    "count_rank_t",
    "count_full_sumrank",
    "exact_prob_full_sumrank",
    "lower_bound_prob",
    "lower_bound_factorwise",
    "PochhammerEnclosure",
    "pochhammer_partial",
    "pentagonal_lower_bound",
    "corollary_bound",
    "fraction_to_decimal_str",
]


def _check_q(q: int) -> int:
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise InvalidDimension(f"field order must be an integer >= 2, got {q!r}")
    return q


def q_pochhammer_Q(q: int, r: int, t: int) -> int:
    """Q_t(q^r) = prod_{i=0}^{t-1} (q^r - q^i), exactly.

    The product is evaluated literally, so r < t yields 0 (the i = r factor
    vanishes); callers with counting semantics validate dimensions
    themselves.
    """
    _check_q(q)
    if r < 0 or t < 0:
        raise InvalidDimension(f"exponents must be nonnegative, got r={r}, t={t}")
    x = q**r
    return prod(x - q**i for i in range(t))


def gaussian_binomial(m: int, t: int, q: int) -> int:
    """Number of t-dimensional subspaces of an m-dimensional space over F_q."""
    if t < 0 or t > m:
        raise InvalidDimension(f"need 0 <= t <= m, got t={t}, m={m}")
    num = q_pochhammer_Q(q, m, t)
    den = q_pochhammer_Q(q, t, t)
    quotient, remainder = divmod(num, den)
    assert remainder == 0, "Gaussian binomial division must be exact"
    return quotient


def count_fixed_colspace(n: int, t: int, q: int) -> int:
    """Number of matrices with n columns whose column space equals a fixed
    t-dimensional subspace (independent of the row count and the subspace)."""
    if t < 0 or t > n:
        raise InvalidDimension(f"need 0 <= t <= n, got t={t}, n={n}")
    return q_pochhammer_Q(q, n, t)


def count_rank_t(m: int, n: int, t: int, q: int) -> int:
    """Number of m x n matrices of rank t over F_q."""
    if t < 0 or t > m or t > n:
        raise InvalidDimension(f"need 0 <= t <= min(m, n), got t={t}, m={m}, n={n}")
    num = q_pochhammer_Q(q, m, t) * q_pochhammer_Q(q, n, t)
    den = q_pochhammer_Q(q, t, t)
    quotient, remainder = divmod(num, den)
    assert remainder == 0, "rank count division must be exact"
    return quotient


@dataclass(frozen=True)
class Scenario:
    """One (q, m, t, partition) instance for the maximal sum-rank event."""

    q: int
    m: int
    t: int
    partition: OrderedPartition

    def __post_init__(self):
        _check_q(self.q)
        if not (self.m >= self.t >= 0):
            raise InvalidDimension(f"need m >= t >= 0, got m={self.m}, t={self.t}")

    @property
    def n(self) -> int:
        return self.partition.n

    @property
    def ell(self) -> int:
        return self.partition.ell

    def require_parts_at_least_t(self):
        small = [p for p in self.partition.parts if p < self.t]
        if small:
            raise InvalidDimension(
                f"every part must be >= t={self.t}, got offending parts {small}"
            )


def count_full_sumrank(s: Scenario) -> int:
    """Number of m x n rank-t matrices whose every block has rank t."""
    s.require_parts_at_least_t()
    subspaces = gaussian_binomial(s.m, s.t, s.q)
    return subspaces * prod(q_pochhammer_Q(s.q, ni, s.t) for ni in s.partition.parts)


def exact_prob_full_sumrank(s: Scenario) -> Fraction:
    """Probability that a uniform rank-t matrix has sum-rank weight ell * t.

    Equals prod_i Q_t(q^{n_i}) / Q_t(q^n) in lowest terms; independent of m.
    For t = 0 the only rank-0 matrix is the zero matrix, whose sum-rank
    weight is 0 = ell * 0, so the probability is 1.
    """
    s.require_parts_at_least_t()
    if s.t == 0:
        return Fraction(1)
    num = prod(q_pochhammer_Q(s.q, ni, s.t) for ni in s.partition.parts)
    den = q_pochhammer_Q(s.q, s.n, s.t)
    return Fraction(num, den)


def lower_bound_prob(n: int, ell: int, t: int, q: int) -> Fraction:
    """Sharp lower bound on the maximal-sum-rank probability over all
    partitions of n into ell parts >= t.

    Equals Q_t(q^t)^(ell-1) Q_t(q^(n-(ell-1)t)) / Q_t(q^n); attained exactly
    at the extremal partition (t, ..., t, n-(ell-1)t) and its permutations.
    """
    _check_q(q)
    if ell < 1 or t < 0:
        raise InvalidDimension(f"need ell >= 1 and t >= 0, got ell={ell}, t={t}")
    if n < ell * t:
        raise InvalidDimension(f"need n >= ell*t, got n={n}, ell={ell}, t={t}")
    if t == 0:
        return Fraction(1)
    num = q_pochhammer_Q(q, t, t) ** (ell - 1) * q_pochhammer_Q(q, n - (ell - 1) * t, t)
    den = q_pochhammer_Q(q, n, t)
    return Fraction(num, den)


def lower_bound_factorwise(
    n: int, ell: int, t: int, q: int, first_index: int = 0
) -> Fraction:
    """The same lower bound expanded factor by factor:

        prod_{i=first_index}^{t-1}
            (1 - q^(i-t))^(ell-1) * (1 - q^(i-n+(ell-1)t)) / (1 - q^(i-n)).

    With ``first_index=0`` this reproduces ``lower_bound_prob`` exactly (the
    q-power prefactors cancel per index).  Some presentations start the
    product at i = 1; that variant gives an empty product of 1 at t = 1 and
    does not equal the exact ratio, so index 0 is the normative start.
    """
    _check_q(q)
    if ell < 1 or t < 1:
        raise InvalidDimension(f"need ell >= 1 and t >= 1, got ell={ell}, t={t}")
    if n < ell * t:
        raise InvalidDimension(f"need n >= ell*t, got n={n}, ell={ell}, t={t}")

    def one_minus_qpow(exponent: int) -> Fraction:
        assert exponent < 0, "factors require negative exponents"
        return Fraction(q ** (-exponent) - 1, q ** (-exponent))

    out = Fraction(1)
    for i in range(first_index, t):
        out *= one_minus_qpow(i - t) ** (ell - 1)
        out *= one_minus_qpow(i - n + (ell - 1) * t)
        out /= one_minus_qpow(i - n)
    return out


@dataclass(frozen=True)
class PochhammerEnclosure:
    """Partial product of (1/q; 1/q)_infinity with a rigorous tail interval.

    ``partial`` is prod_{j=1}^{terms} (1 - q^-j); the infinite product lies
    in [lower, upper] because the tail factors multiply to something in
    [1 - q^-terms/(q-1), 1).
    """

    q: int
    terms: int
    partial: Fraction
    lower: Fraction
    upper: Fraction

    def contains(self, value: Fraction, slack: Fraction = Fraction(0)) -> bool:
        return self.lower - slack <= value <= self.upper + slack

    def decimals(self, significant_digits: int = 30) -> dict[str, str]:
        return {
            "partial": fraction_to_decimal_str(self.partial, significant_digits),
            "lower": fraction_to_decimal_str(self.lower, significant_digits),
            "upper": fraction_to_decimal_str(self.upper, significant_digits),
        }


def pochhammer_partial(q: int, terms: int) -> PochhammerEnclosure:
    """Evaluate prod_{j=1}^{terms} (1 - q^-j) exactly, with an enclosure of
    the full q-Pochhammer limit (1/q; 1/q)_infinity."""
    _check_q(q)
    if terms < 1:
        raise InvalidDimension(f"need at least one term, got {terms}")
    partial = Fraction(1)
    for j in range(1, terms + 1):
        partial *= Fraction(q**j - 1, q**j)
    tail_low = 1 - Fraction(1, q**terms * (q - 1))
    return PochhammerEnclosure(
        q=q, terms=terms, partial=partial, lower=partial * tail_low, upper=partial
    )


def pentagonal_lower_bound(q: int) -> Fraction:
    """1 - 1/q - 1/q^2, the two-term pentagonal-series truncation that
    bounds (1/q; 1/q)_infinity from below for q >= 2."""
    _check_q(q)
    return Fraction(q * q - q - 1, q * q)


def corollary_bound(q: int, ell: int) -> Fraction:
    """(1 - 1/q - 1/q^2)^ell, a partition-independent lower bound on the
    maximal-sum-rank probability."""
    if ell < 1:
        raise InvalidDimension(f"need ell >= 1, got {ell}")
    return pentagonal_lower_bound(q) ** ell


def fraction_to_decimal_str(value: Fraction, significant_digits: int = 12) -> str:
    """Render an exact rational with the given number of significant digits."""
    with localcontext() as ctx:
        ctx.prec = significant_digits
        d = Decimal(value.numerator) / Decimal(value.denominator)
    return str(d)
