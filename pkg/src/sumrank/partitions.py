"""Ordered partitions with part constraints and the product-of-Q_t objective.

The minimizing partition of n into ell parts >= t is always the extremal
tuple (t, ..., t, n-(ell-1)t) up to permutation; ``minimize_product`` returns
it directly, and the exhaustive scan mode exists as the independent check of
that formula.
"""

from __future__ import annotations

from typing import Iterator

from .counting import q_pochhammer_Q
from .errors import InvalidDimension
from .matrix import OrderedPartition

__all__ = [
    "enumerate_partitions",
    "product_Q",
    "minimize_product",
    "extremal_partition",
    "exchange_inequality_margin",
]


def enumerate_partitions(n: int, ell: int, min_part: int = 1) -> Iterator[OrderedPartition]:
    """Yield every ordered partition of n into ell parts >= min_part, in
    lexicographic order; the stream is empty when n < ell * min_part."""
    if n < 1 or ell < 1 or min_part < 1:
        raise InvalidDimension(
            f"need n, ell, min_part >= 1, got n={n}, ell={ell}, min_part={min_part}"
        )

    def rec(remaining: int, slots: int, prefix: tuple[int, ...]):
        if slots == 1:
            if remaining >= min_part:
                yield OrderedPartition(prefix + (remaining,))
            return
        for first in range(min_part, remaining - min_part * (slots - 1) + 1):
            yield from rec(remaining - first, slots - 1, prefix + (first,))

    yield from rec(n, ell, ())


def product_Q(partition: OrderedPartition, t: int, q: int) -> int:
    """prod_i Q_t(q^{n_i}) over the parts of the partition."""
    small = [p for p in partition.parts if p < t]
    if small:
        raise InvalidDimension(f"every part must be >= t={t}, got offending parts {small}")
    out = 1
    for ni in partition.parts:
        out *= q_pochhammer_Q(q, ni, t)
    return out


def extremal_partition(n: int, ell: int, t: int) -> OrderedPartition:
    """(t, ..., t, n-(ell-1)t): the lexicographically smallest minimizer."""
    if t < 1 or ell < 1 or n < ell * t:
        raise InvalidDimension(f"need t >= 1 and n >= ell*t, got n={n}, ell={ell}, t={t}")
    return OrderedPartition((t,) * (ell - 1) + (n - (ell - 1) * t,))


def minimize_product(
    n: int, ell: int, t: int, q: int, exhaustive: bool = False
) -> tuple[OrderedPartition, int]:
    """Partition of n into ell parts >= t minimizing product_Q, with the
    minimal value.  Ties go to the lexicographically smallest partition.

    The direct path returns the extremal tuple; ``exhaustive=True`` scans
    every admissible partition instead and is the verification oracle for
    the direct path.
    """
    if t < 1 or ell < 1 or n < ell * t:
        raise InvalidDimension(f"need t >= 1 and n >= ell*t, got n={n}, ell={ell}, t={t}")
    if not exhaustive:
        best = extremal_partition(n, ell, t)
        return best, product_Q(best, t, q)
    best_partition = None
    best_value = None
    for partition in enumerate_partitions(n, ell, min_part=t):
        value = product_Q(partition, t, q)
        if best_value is None or value < best_value:
            best_partition, best_value = partition, value
    assert best_partition is not None, "the admissible partition set is never empty here"
    return best_partition, best_value


def exchange_inequality_margin(a: int, b: int, t: int, q: int) -> int:
    """Q_t(q^a) Q_t(q^b) - Q_t(q^(a+1)) Q_t(q^(b-1)).

    Strictly positive whenever a >= b >= t+1 (shifting mass between two
    parts away from balance can only happen toward the extremal shape); at
    b = t the second term carries a literal Q_t(q^(t-1)) = 0 factor.
    """
    if t < 0:
        raise InvalidDimension(f"need t >= 0, got t={t}")
    if b < max(t, 1) or a < b:
        raise InvalidDimension(f"need a >= b >= max(t, 1), got a={a}, b={b}, t={t}")
    keep = q_pochhammer_Q(q, a, t) * q_pochhammer_Q(q, b, t)
    shift = q_pochhammer_Q(q, a + 1, t) * q_pochhammer_Q(q, b - 1, t)
    return keep - shift
