"""Matrices over F_q: rank, column space, and sum-rank weight over block
partitions.

Entries are stored canonically int-encoded (see ``sumrank.field``) in a dense
immutable array.  All operations use exact Gaussian elimination with
first-nonzero pivot selection; over an exact field there is nothing to gain
from pivoting heuristics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PartitionMismatch
from .field import Fq, _as_field

__all__ = [
    "OrderedPartition",
    "FqMatrix",
    "rank",
    "column_space_basis",
    "blocks",
    "sum_rank_weight",
    "parse_matrix_text",
    "format_matrix_text",
]


@dataclass(frozen=True)
class OrderedPartition:
    """An ordered tuple (n_1, ..., n_ell) of positive integers."""

    parts: tuple[int, ...]

    def __post_init__(self):
        parts = tuple(int(x) for x in self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise PartitionMismatch("a partition needs at least one part")
        if any(x < 1 for x in parts):
            raise PartitionMismatch(f"partition parts must be >= 1, got {parts}")

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def ell(self) -> int:
        return len(self.parts)

    @classmethod
    def parse(cls, text: str) -> "OrderedPartition":
        """Parse a comma-separated part list like "2,2" or "1,3"."""
        try:
            parts = tuple(int(x) for x in text.split(","))
        except ValueError:
            raise PartitionMismatch(f"cannot parse partition {text!r}") from None
        return cls(parts)

    def __str__(self) -> str:
        return ",".join(str(x) for x in self.parts)

    def offsets(self) -> list[tuple[int, int]]:
        """Column ranges [(start, stop), ...] of the blocks."""
        out, pos = [], 0
        for width in self.parts:
            out.append((pos, pos + width))
            pos += width
        return out


class FqMatrix:
    """An immutable m x n matrix over F_q with int-encoded entries."""

    __slots__ = ("field", "entries", "m", "n")

    def __init__(self, field, entries):
        fq = _as_field(field)
        arr = np.array(entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"need a 2-d matrix with m, n >= 1, got shape {arr.shape}")
        if arr.min() < 0 or arr.max() >= fq.q:
            raise ValueError(f"entries must be canonical in [0, {fq.q})")
        arr.flags.writeable = False
        self.field: Fq = fq
        self.entries: np.ndarray = arr
        self.m, self.n = arr.shape

    @property
    def spec(self):
        return self.field.spec

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, FqMatrix)
            and self.field.q == other.field.q
            and np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash((self.field.q, self.entries.tobytes(), self.n))

    def __repr__(self) -> str:
        return f"FqMatrix(q={self.field.q}, {self.m}x{self.n})"

    def rows(self) -> list[list[int]]:
        return [[int(x) for x in row] for row in self.entries]

    @classmethod
    def zero(cls, field, m: int, n: int) -> "FqMatrix":
        return cls(field, np.zeros((m, n), dtype=np.int64))

    @classmethod
    def identity(cls, field, n: int) -> "FqMatrix":
        return cls(field, np.eye(n, dtype=np.int64))


def _row_echelon(rows: list[list[int]], fq: Fq) -> int:
    """In-place forward elimination; returns the rank."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = fq.inv(rows[r][col])
        if inv != 1:
            rows[r] = [fq.mul(inv, x) for x in rows[r]]
        for i in range(r + 1, m):
            f = rows[i][col]
            if f:
                rows[i] = [fq.sub(x, fq.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == m:
            break
    return r


def _reduced_row_echelon(rows: list[list[int]], fq: Fq) -> list[list[int]]:
    """Reduced row echelon form; returns the nonzero rows."""
    work = [row[:] for row in rows]
    m = len(work)
    n = len(work[0]) if m else 0
    r = 0
    for col in range(n):
        pivot = next((i for i in range(r, m) if work[i][col] != 0), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        inv = fq.inv(work[r][col])
        if inv != 1:
            work[r] = [fq.mul(inv, x) for x in work[r]]
        for i in range(m):
            if i != r and work[i][col]:
                f = work[i][col]
                work[i] = [fq.sub(x, fq.mul(f, y)) for x, y in zip(work[i], work[r])]
        r += 1
        if r == m:
            break
    return work[:r]


def rank(a: FqMatrix) -> int:
    """Dimension of the column space, by Gaussian elimination."""
    return _row_echelon(a.rows(), a.field)


def column_space_basis(a: FqMatrix) -> list[tuple[int, ...]]:
    """Canonical basis of the column space.

    The basis is the set of nonzero rows of the reduced row echelon form of
    the transpose, so two matrices with equal column spaces always yield the
    identical list.
    """
    cols = [[int(a.entries[i, j]) for i in range(a.m)] for j in range(a.n)]
    return [tuple(row) for row in _reduced_row_echelon(cols, a.field)]


def blocks(a: FqMatrix, partition: OrderedPartition) -> list[FqMatrix]:
    """The contiguous column blocks of ``a``; copies, not views."""
    if partition.n != a.n:
        raise PartitionMismatch(
            f"partition sums to {partition.n} but the matrix has {a.n} columns"
        )
    return [
        FqMatrix(a.field, a.entries[:, start:stop].copy())
        for start, stop in partition.offsets()
    ]


def sum_rank_weight(a: FqMatrix, partition: OrderedPartition) -> int:
    """Sum of the ranks of the column blocks under the partition."""
    return sum(rank(b) for b in blocks(a, partition))


# ---------------------------------------------------------------------------
# Text format: first line "q m n", then m lines of n entries.  Entries are
# plain integers for prime fields and colon-joined coefficient tuples
# (constant term first) for extension fields.
# ---------------------------------------------------------------------------


def _format_entry(value: int, fq: Fq) -> str:
    if fq.e == 1:
        return str(value)
    return ":".join(str(c) for c in fq.to_coeffs(value))


def _parse_entry(token: str, fq: Fq) -> int:
    if fq.e == 1:
        value = int(token)
        if not (0 <= value < fq.q):
            raise ValueError(f"entry {token!r} out of range for F_{fq.q}")
        return value
    coeffs = tuple(int(c) for c in token.split(":"))
    if len(coeffs) != fq.e or any(not (0 <= c < fq.p) for c in coeffs):
        raise ValueError(f"entry {token!r} is not a length-{fq.e} tuple over F_{fq.p}")
    return fq.from_coeffs(coeffs)


def format_matrix_text(a: FqMatrix) -> str:
    lines = [f"{a.field.q} {a.m} {a.n}"]
    for row in a.rows():
        lines.append(" ".join(_format_entry(x, a.field) for x in row))
    return "\n".join(lines) + "\n"


def parse_matrix_text(text: str) -> FqMatrix:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 3:
        raise ValueError(f"expected header 'q m n', got {lines[0]!r}")
    q, m, n = (int(x) for x in header)
    fq = _as_field(q)
    if len(lines) != m + 1:
        raise ValueError(f"expected {m} entry rows, got {len(lines) - 1}")
    entries = []
    for ln in lines[1 : m + 1]:
        tokens = ln.split()
        if len(tokens) != n:
            raise ValueError(f"expected {n} entries per row, got {len(tokens)}")
        entries.append([_parse_entry(tok, fq) for tok in tokens])
    return FqMatrix(fq, entries)
