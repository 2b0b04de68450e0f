"""Arithmetic in F_q for prime q and small prime-power q.

Elements are represented as integers in ``[0, q)`` whose base-p digits are
the coefficients of the residue polynomial: element ``a`` stands for
``sum_i a_i x^i`` with ``a = sum_i a_i p^i`` and ``0 <= a_i < p``.  For a
prime field (e = 1) this is plainly the integer residue mod p.  The zero
and one of the field are always encoded as ``0`` and ``1``.

Extension fields are built modulo a fixed irreducible polynomial: a
built-in one for the common small orders, otherwise the lexicographically
first monic irreducible polynomial of the right degree (so a given q always
yields the same field representation).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import DivisionByZero, FieldTooLarge, NotAPrimePower

# Largest q for which dense q x q operation tables are built (the batched
# kernels need them; scalar arithmetic works for any supported q).
DENSE_TABLE_LIMIT = 256

# Miller-Rabin with this witness set is deterministic below 3.3 * 10^24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

# Irreducible moduli for the common small extension fields, as ascending
# coefficient tuples (constant term first, monic leading 1).
_BUILTIN_MODULI: dict[int, tuple[int, ...]] = {
    4: (1, 1, 1),            # x^2 + x + 1 over F_2
    8: (1, 1, 0, 1),         # x^3 + x + 1 over F_2
    9: (1, 0, 1),            # x^2 + 1 over F_3
    16: (1, 1, 0, 0, 1),     # x^4 + x + 1 over F_2
    25: (1, 1, 1),           # x^2 + x + 1 over F_5
    27: (1, 2, 0, 1),        # x^3 + 2x + 1 over F_3
    32: (1, 0, 1, 0, 0, 1),  # x^5 + x^2 + 1 over F_2
    49: (1, 0, 1),           # x^2 + 1 over F_7
    64: (1, 1, 0, 0, 0, 0, 1),  # x^6 + x + 1 over F_2
}


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin primality test (exact for n < 3.3e24)."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _integer_root(x: int, k: int) -> int:
    """Floor of the k-th root of x >= 1 (binary search, exact for any int)."""
    if k == 1:
        return x
    lo, hi = 1, 1 << (x.bit_length() // k + 1)
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if mid**k <= x:
            lo = mid
        else:
            hi = mid - 1
    return lo


# ---------------------------------------------------------------------------
# Polynomial helpers over F_p (ascending coefficient tuples)
# ---------------------------------------------------------------------------


def _poly_trim(c: list[int]) -> tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _poly_mul(a: tuple[int, ...], b: tuple[int, ...], p: int) -> tuple[int, ...]:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_trim(out)


def _poly_mod(a: tuple[int, ...], m: tuple[int, ...], p: int) -> tuple[int, ...]:
    """Remainder of a modulo the monic polynomial m."""
    r = list(a)
    dm = len(m) - 1
    while len(r) - 1 >= dm and r:
        lead = r[-1]
        if lead:
            shift = len(r) - 1 - dm
            for i, mi in enumerate(m):
                r[shift + i] = (r[shift + i] - lead * mi) % p
        r.pop()
    return _poly_trim(r)


def _poly_divisible(a: tuple[int, ...], b: tuple[int, ...], p: int) -> bool:
    return not _poly_mod(a, b, p)


def _monic_polys(degree: int, p: int):
    """All monic polynomials of the given degree over F_p, lexicographically
    by the integer encoding of the lower coefficients (constant term fastest)."""
    for code in range(p**degree):
        coeffs = []
        c = code
        for _ in range(degree):
            c, digit = divmod(c, p)
            coeffs.append(digit)
        # digits come out constant-term first already
        yield tuple(coeffs) + (1,)


def is_irreducible(poly: tuple[int, ...], p: int) -> bool:
    """Trial division by every monic polynomial of degree <= deg/2."""
    degree = len(poly) - 1
    if degree < 1 or poly[-1] != 1:
        return False
    if degree == 1:
        return True
    for d in range(1, degree // 2 + 1):
        for g in _monic_polys(d, p):
            if _poly_divisible(poly, g, p):
                return False
    return True


def _find_modulus(p: int, e: int) -> tuple[int, ...]:
    q = p**e
    builtin = _BUILTIN_MODULI.get(q)
    if builtin is not None:
        return builtin
    for cand in _monic_polys(e, p):
        if is_irreducible(cand, p):
            return cand
    raise NotAPrimePower(f"no irreducible polynomial of degree {e} over F_{p}")  # pragma: no cover


# ---------------------------------------------------------------------------
# Field specification
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FieldSpec:
    """A validated prime power q = p^e with its residue-field modulus.

    ``modulus`` is the ascending coefficient tuple of a monic irreducible
    degree-e polynomial over F_p; it is empty when e = 1.
    """

    q: int
    p: int
    e: int
    modulus: tuple[int, ...] = ()

    def __post_init__(self):
        if self.e < 1 or self.p < 2 or not is_prime(self.p):
            raise NotAPrimePower(f"p={self.p} is not prime")
        if self.q != self.p**self.e:
            raise NotAPrimePower(f"q={self.q} != {self.p}^{self.e}")
        if self.e == 1:
            if self.modulus != ():
                raise NotAPrimePower("prime fields carry no modulus")
        else:
            m = self.modulus
            if len(m) != self.e + 1 or m[-1] != 1:
                raise NotAPrimePower(f"modulus {m} is not monic of degree {self.e}")
            if any(not (0 <= c < self.p) for c in m):
                raise NotAPrimePower(f"modulus {m} has coefficients outside F_{self.p}")
            if not is_irreducible(m, self.p):
                raise NotAPrimePower(f"modulus {m} is reducible over F_{self.p}")


def validate_prime_power(q: int) -> FieldSpec:
    """Split q into (p, e) with p prime, attaching an irreducible modulus.

    Raises NotAPrimePower for q < 2 and for orders with two distinct prime
    factors.
    """
    if not isinstance(q, int) or isinstance(q, bool) or q < 2:
        raise NotAPrimePower(f"{q!r} is not a prime power (need an integer >= 2)")
    for e in range(q.bit_length(), 0, -1):
        p = _integer_root(q, e)
        if p**e == q and is_prime(p):
            modulus = _find_modulus(p, e) if e > 1 else ()
            return FieldSpec(q=q, p=p, e=e, modulus=modulus)
    raise NotAPrimePower(f"{q} is not a prime power")


# ---------------------------------------------------------------------------
# Arithmetic
# ---------------------------------------------------------------------------


class Fq:
    """Scalar arithmetic on int-encoded elements of F_q.

    Prime fields work directly mod p.  Extension fields use exp/log tables
    with respect to a fixed primitive element, plus digitwise base-p
    addition, so memory stays O(q).
    """

    def __init__(self, spec: FieldSpec):
        self.spec = spec
        self.q = spec.q
        self.p = spec.p
        self.e = spec.e
        if spec.e > 1:
            self._build_exp_log()
        self._dense: tuple[np.ndarray, ...] | None = None

    # -- construction -------------------------------------------------

    def _mul_poly(self, a: int, b: int) -> int:
        pa = self.to_coeffs(a)
        pb = self.to_coeffs(b)
        prod = _poly_mul(_poly_trim(list(pa)), _poly_trim(list(pb)), self.p)
        red = _poly_mod(prod, self.spec.modulus, self.p)
        return self.from_coeffs(red + (0,) * (self.e - len(red)))

    def _build_exp_log(self):
        q = self.q
        # prime factors of the multiplicative group order
        n = q - 1
        factors = set()
        d = 2
        while d * d <= n:
            while n % d == 0:
                factors.add(d)
                n //= d
            d += 1
        if n > 1:
            factors.add(n)

        def pow_poly(g: int, k: int) -> int:
            acc, base = 1, g
            while k:
                if k & 1:
                    acc = self._mul_poly(acc, base)
                base = self._mul_poly(base, base)
                k >>= 1
            return acc

        gen = 0
        for g in range(2, q):
            if all(pow_poly(g, (q - 1) // f) != 1 for f in factors):
                gen = g
                break
        assert gen, "no primitive element found"
        exp = [1] * (q - 1)
        log = [0] * q
        v = 1
        for i in range(q - 1):
            exp[i] = v
            log[v] = i
            v = self._mul_poly(v, gen)
        assert v == 1, "generator order mismatch"
        self._exp = exp
        self._log = log

    # -- canonical encoding --------------------------------------------

    def to_coeffs(self, a: int) -> tuple[int, ...]:
        """Base-p digits of a, constant term first, always length e."""
        out = []
        for _ in range(self.e):
            a, d = divmod(a, self.p)
            out.append(d)
        return tuple(out)

    def from_coeffs(self, coeffs) -> int:
        a = 0
        for c in reversed(tuple(coeffs)):
            a = a * self.p + c
        return a

    def _check(self, a: int) -> int:
        if not (0 <= a < self.q):
            raise ValueError(f"{a} is not a canonical element of F_{self.q}")
        return a

    # -- field operations ----------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        out, mult = 0, 1
        for _ in range(self.e):
            a, da = divmod(a, self.p)
            b, db = divmod(b, self.p)
            out += (da + db) % self.p * mult
            mult *= self.p
        return out

    def neg(self, a: int) -> int:
        if self.e == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        out, mult = 0, 1
        for _ in range(self.e):
            a, da = divmod(a, self.p)
            out += (-da) % self.p * mult
            mult *= self.p
        return out

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.e == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero(f"0 has no inverse in F_{self.q}")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        if self.e == 1:
            return pow(a, k, self.p)
        if a == 0:
            return 0 if k else 1
        return self._exp[self._log[a] * k % (self.q - 1)]

    # -- dense operation tables for the batched kernels -----------------

    def dense_tables(self) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """(add, sub, mul, inv) lookup tables as uint8 arrays.

        Only available for q <= DENSE_TABLE_LIMIT; inv[0] is a 0 sentinel
        that no kernel may rely on.
        """
        if self.q > DENSE_TABLE_LIMIT:
            raise FieldTooLarge(
                f"dense tables are limited to q <= {DENSE_TABLE_LIMIT}, got q={self.q}"
            )
        if self._dense is None:
            q = self.q
            add = np.empty((q, q), dtype=np.uint8)
            sub = np.empty((q, q), dtype=np.uint8)
            mul = np.empty((q, q), dtype=np.uint8)
            inv = np.zeros(q, dtype=np.uint8)
            for a in range(q):
                for b in range(q):
                    add[a, b] = self.add(a, b)
                    sub[a, b] = self.sub(a, b)
                    mul[a, b] = self.mul(a, b)
                if a:
                    inv[a] = self.inv(a)
            for t in (add, sub, mul, inv):
                t.flags.writeable = False
            self._dense = (add, sub, mul, inv)
        return self._dense


@lru_cache(maxsize=None)
def get_field(q: int) -> Fq:
    """Shared Fq instance for the given order (validates q)."""
    return Fq(validate_prime_power(q))


def _as_field(field) -> Fq:
    if isinstance(field, Fq):
        return field
    if isinstance(field, FieldSpec):
        return get_field(field.q)
    return get_field(int(field))


def field_op(spec, op: str, a: int, b: int = 0) -> int:
    """Apply one named field operation on canonical int-encoded elements.

    ``op`` is one of add/sub/mul/inv; inv inverts ``b`` and ignores ``a``.
    """
    fq = _as_field(spec)
    if op == "inv":
        fq._check(b)
        return fq.inv(b)
    fq._check(a)
    fq._check(b)
    if op == "add":
        return fq.add(a, b)
    if op == "sub":
        return fq.sub(a, b)
    if op == "mul":
        return fq.mul(a, b)
    raise ValueError(f"unknown field operation {op!r}")
