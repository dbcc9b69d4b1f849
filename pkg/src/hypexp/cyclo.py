"""Exact arithmetic with sums of roots of unity.

Two representations are used:

* `RouCounts` holds an element of Z[zeta_p] as a vector of signed
  multiplicities of the p-th roots of unity.  Every exponential-sum value in
  this package is accumulated as such counts, never as floats.

* `GroupRingElement` holds an element of the group ring Z[Z/p x Z/n]
  (gcd(n, p) = 1), which surjects onto Z[zeta_p, zeta_n].  Gauss sums and
  their products live here.  Multiplication is plain convolution with no
  reduction; equality and valuations reduce modulo sum(zeta_p^i) = 0 and
  Phi_n(zeta_n) = 0 first.

The p-adic valuation at the unique place over p is computed by repeated
exact division by pi = 1 - zeta_p, normalized so ord(#K) = 1.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .field import FiniteField


class NotRational(ValueError):
    """The value has a nonzero zeta-coefficient in canonical form."""


class MismatchedRing(ValueError):
    """Operands live in different group rings."""


class ZeroValue(ValueError):
    """The zero element has no p-adic valuation."""


# ---------------------------------------------------------------------------
# integer polynomial helpers (little-endian coefficient lists)
# ---------------------------------------------------------------------------

def _polydiv_exact(num, den):
    """Exact division of integer polynomials, den monic."""
    num = list(num)
    dden = len(den) - 1
    out = [0] * (len(num) - dden)
    for i in range(len(num) - 1, dden - 1, -1):
        c = num[i]
        if c:
            out[i - dden] = c
            for j in range(dden + 1):
                num[i - dden + j] -= c * den[j]
    assert not any(num), "non-exact polynomial division"
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int):
    """Coefficients of Phi_n over Z."""
    if n == 1:
        return (-1, 1)
    num = [0] * (n + 1)
    num[0], num[n] = -1, 1
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, cyclotomic_poly(d))
    return tuple(num)


def _reduce_mod_cyclotomic(row, n):
    """Reduce a coefficient vector of zeta_n powers mod Phi_n."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    row = [int(c) for c in row]
    for i in range(len(row) - 1, deg - 1, -1):
        c = row[i]
        if c:
            row[i] = 0
            for j in range(deg):
                row[i - deg + j] -= c * phi[j]
    row += [0] * (deg - len(row))
    return row[:deg]


@lru_cache(maxsize=None)
def _pi_division_matrix(p: int):
    """Matrix of multiplication by p/(1 - zeta_p) on Z[zeta_p].

    Uses 1/(1 - zeta_p) = -(1/p) * sum_{j=1}^{p-1} j zeta_p^j; the returned
    (p-1) x (p-1) integer matrix M satisfies: v divisible by pi iff all
    entries of M @ v are divisible by p, and then v/pi = (M @ v)/p.
    """
    m = _reduce_mod_cyclotomic([0] + [-j for j in range(1, p)], p)
    mat = np.zeros((p - 1, p - 1), dtype=object)
    for i in range(p - 1):
        mat[:, i] = _reduce_mod_cyclotomic([0] * i + list(m), p)
    return mat


class RouCounts:
    """Element of Z[zeta_p] stored as multiplicities of each p-th root."""

    __slots__ = ("p", "counts", "_canon")

    def __init__(self, p: int, counts):
        self.p = p
        self.counts = tuple(int(c) for c in counts)
        if len(self.counts) != p:
            raise ValueError(f"need {p} counts, got {len(self.counts)}")
        self._canon = None

    @classmethod
    def zero(cls, p: int) -> "RouCounts":
        return cls(p, (0,) * p)

    @classmethod
    def integer(cls, p: int, value: int) -> "RouCounts":
        return cls(p, (value,) + (0,) * (p - 1))

    @classmethod
    def single(cls, p: int, index: int, mult: int = 1) -> "RouCounts":
        c = [0] * p
        c[index % p] = mult
        return cls(p, c)

    def canonical(self):
        """Counts with the last coordinate forced to 0 via sum(zeta^i) = 0."""
        if self._canon is None:
            last = self.counts[-1]
            self._canon = tuple(c - last for c in self.counts[:-1]) + (0,)
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, RouCounts):
            return NotImplemented
        return self.p == other.p and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.p, self.canonical()))

    def __add__(self, other):
        self._check(other)
        return RouCounts(self.p, tuple(a + b for a, b in zip(self.counts, other.counts)))

    def __sub__(self, other):
        self._check(other)
        return RouCounts(self.p, tuple(a - b for a, b in zip(self.counts, other.counts)))

    def __neg__(self):
        return RouCounts(self.p, tuple(-a for a in self.counts))

    def __mul__(self, other):
        if isinstance(other, int):
            return RouCounts(self.p, tuple(a * other for a in self.counts))
        self._check(other)
        p = self.p
        out = [0] * p
        for i, a in enumerate(self.counts):
            if a:
                for j, b in enumerate(other.counts):
                    if b:
                        out[(i + j) % p] += a * b
        return RouCounts(p, out)

    __rmul__ = __mul__

    def _check(self, other):
        if not isinstance(other, RouCounts) or other.p != self.p:
            raise MismatchedRing("RouCounts over different p")

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.canonical())

    def __repr__(self):
        return f"RouCounts(p={self.p}, {self.counts})"


def to_exact_integer(v: RouCounts) -> int:
    """The integer value of a Galois-invariant element of Z[zeta_p]."""
    canon = v.canonical()
    if any(canon[1:]):
        raise NotRational(f"canonical form {canon} has nonzero zeta-coefficients")
    return canon[0]


class GroupRingElement:
    """Element of Z[Z/p x Z/n]; coefficient [i][j] multiplies zeta_p^i zeta_n^j."""

    __slots__ = ("p", "n", "coeffs", "_canon")

    def __init__(self, p: int, n: int, coeffs):
        self.p = p
        self.n = n
        arr = np.asarray(coeffs, dtype=object)
        if arr.shape != (p, n):
            raise ValueError(f"coefficient array must be {p}x{n}, got {arr.shape}")
        # plain Python ints, so object-array products can never overflow
        out = np.zeros((p, n), dtype=object)
        for i in range(p):
            out[i] = [int(c) for c in arr[i]]
        self.coeffs = out
        self._canon = None

    @classmethod
    def zero(cls, p: int, n: int) -> "GroupRingElement":
        return cls(p, n, np.zeros((p, n), dtype=object))

    @classmethod
    def integer(cls, p: int, n: int, value: int) -> "GroupRingElement":
        arr = np.zeros((p, n), dtype=object)
        arr[0, 0] = int(value)
        return cls(p, n, arr)

    @classmethod
    def monomial(cls, p: int, n: int, i: int, j: int, mult: int = 1) -> "GroupRingElement":
        arr = np.zeros((p, n), dtype=object)
        arr[i % p, j % n] = int(mult)
        return cls(p, n, arr)

    @classmethod
    def from_rou(cls, v: RouCounts, n: int = 1) -> "GroupRingElement":
        arr = np.zeros((v.p, n), dtype=object)
        for i, c in enumerate(v.counts):
            arr[i, 0] = int(c)
        return cls(v.p, n, arr)

    def canonical(self):
        """Reduced (p-1) x phi(n) integer matrix in the tensor basis."""
        if self._canon is None:
            reduced_rows = [_reduce_mod_cyclotomic(list(self.coeffs[i]), self.n)
                            for i in range(self.p)]
            m = len(reduced_rows[0])
            last = reduced_rows[-1]
            canon = tuple(
                tuple(reduced_rows[i][j] - last[j] for j in range(m))
                for i in range(self.p - 1)
            )
            self._canon = canon
        return self._canon

    def __eq__(self, other):
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return (self.p, self.n) == (other.p, other.n) and self.canonical() == other.canonical()

    def __hash__(self):
        return hash((self.p, self.n, self.canonical()))

    def _check(self, other):
        if not isinstance(other, GroupRingElement) or (self.p, self.n) != (other.p, other.n):
            raise MismatchedRing("group-ring elements over different (p, n)")

    def __add__(self, other):
        self._check(other)
        return GroupRingElement(self.p, self.n, self.coeffs + other.coeffs)

    def __sub__(self, other):
        self._check(other)
        return GroupRingElement(self.p, self.n, self.coeffs - other.coeffs)

    def __neg__(self):
        return GroupRingElement(self.p, self.n, -self.coeffs)

    def scale(self, c: int) -> "GroupRingElement":
        return GroupRingElement(self.p, self.n, self.coeffs * int(c))

    def is_zero(self) -> bool:
        return not any(any(row) for row in self.canonical())

    def max_abs(self) -> int:
        return max((abs(int(c)) for c in self.coeffs.flat), default=0)

    def __repr__(self):
        return f"GroupRingElement(p={self.p}, n={self.n})"


def gr_conj(v: GroupRingElement) -> GroupRingElement:
    """Complex conjugation: zeta_p, zeta_n -> their inverses."""
    p, n = v.p, v.n
    out = np.zeros((p, n), dtype=object)
    for i in range(p):
        for j in range(n):
            out[(-i) % p, (-j) % n] = v.coeffs[i, j]
    return GroupRingElement(p, n, out)


def _conv_cyclic_int(a, b, n):
    """Exact cyclic convolution of two length-n integer vectors."""
    full = np.convolve(a, b)
    out = full[:n].copy()
    if len(full) > n:
        out[: len(full) - n] += full[n:]
    return out


def gr_mul(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    """Exact convolution product in Z[Z/p x Z/n]."""
    a._check(b)
    p, n = a.p, a.n
    # int64 fast path when products cannot overflow
    bound = a.max_abs() * b.max_abs() * n
    if bound < (1 << 62):
        ca = a.coeffs.astype(np.int64)
        cb = b.coeffs.astype(np.int64)
        out = np.zeros((p, n), dtype=np.int64)
        for i1 in range(p):
            if not ca[i1].any():
                continue
            for i2 in range(p):
                if not cb[i2].any():
                    continue
                out[(i1 + i2) % p] += _conv_cyclic_int(ca[i1], cb[i2], n)
        return GroupRingElement(p, n, out.astype(object))
    out = np.zeros((p, n), dtype=object)
    for i1 in range(p):
        row_a = a.coeffs[i1]
        if not row_a.any():
            continue
        for i2 in range(p):
            row_b = b.coeffs[i2]
            if not row_b.any():
                continue
            tgt = out[(i1 + i2) % p]
            for j1 in range(n):
                c = row_a[j1]
                if c:
                    for j2 in range(n):
                        d = row_b[j2]
                        if d:
                            tgt[(j1 + j2) % n] += c * d
    return GroupRingElement(p, n, out)


def complex_embed(v, rou_p: int = 1, rou_n: int = 1):
    """Complex value under the embedding zeta_p -> exp(2 pi i rou_p / p).

    Returns (value, error_bound) where the bound covers the rounding error
    of the evaluated roots of unity (number of terms times ulp-scale).
    """
    if isinstance(v, RouCounts):
        p = v.p
        total = 0j
        weight = 0
        for i, c in enumerate(v.counts):
            if c:
                total += c * cmath.exp(2j * cmath.pi * ((rou_p * i) % p) / p)
                weight += abs(c)
        return total, 8 * weight * 2.3e-16
    if isinstance(v, GroupRingElement):
        p, n = v.p, v.n
        total = 0j
        weight = 0
        for i in range(p):
            row = v.coeffs[i]
            for j in range(n):
                c = row[j]
                if c:
                    ang = (rou_p * i) / p + (rou_n * j) / n
                    total += int(c) * cmath.exp(2j * cmath.pi * (ang % 1.0))
                    weight += abs(int(c))
        return total, 8 * weight * 2.3e-16
    raise TypeError(f"cannot embed {type(v)!r}")


# -- truncated arithmetic in the unramified local ring W = Z_p[x]/(F) --------

def _w_mul(a, b, F, pM):
    r = len(F) - 1
    prod = [0] * (2 * r - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] = (prod[i + j] + x * y) % pM
    for i in range(2 * r - 2, r - 1, -1):
        c = prod[i]
        if c:
            prod[i] = 0
            for j in range(r):
                prod[i - r + j] = (prod[i - r + j] - c * F[j]) % pM
    return prod[:r]


def _w_pow(a, e, F, pM):
    result = [1] + [0] * (len(F) - 2)
    base = list(a)
    while e:
        if e & 1:
            result = _w_mul(result, base, F, pM)
        base = _w_mul(base, base, F, pM)
        e >>= 1
    return result


def _teichmueller(K: FiniteField, packed: int, F, pM, iters: int):
    """Teichmueller lift of a field element into Z[x]/(F, p^M)."""
    z = list(K.coeffs(packed))
    for _ in range(iters):
        z = _w_pow(z, K.q, F, pM)
    return z


def p_adic_ord(v: GroupRingElement, K: FiniteField, _precision: int = 64) -> Fraction:
    """Valuation at the place over p fixed by K's generator, ord(#K) = 1.

    The place is pinned by reducing zeta_n to the Teichmueller lift of
    g^{-(q-1)/n}, which makes chi_k (the dlog character) equal to
    Teich^{-k} there.  The valuation is then the number of exact divisions
    by pi = 1 - zeta_p in the completed ring, each contributing
    1/(f (p-1)) with #K = p^f.
    """
    p = v.p
    if p != K.p:
        raise MismatchedRing(f"element over p={p}, field has characteristic {K.p}")
    if (K.q - 1) % v.n != 0:
        raise MismatchedRing(f"zeta_{v.n} does not live in GF({K.q})")
    canon = v.canonical()
    if not any(any(row) for row in canon):
        raise ZeroValue("the zero element has no valuation")

    M = _precision
    while True:
        pM = p ** M
        F = [c % p for c in K.modulus]
        if v.n == 1:
            T = [1] + [0] * (K.r - 1)
        else:
            ghat = K.pow_el(K.generator, (K.q - 1) - (K.q - 1) // v.n)
            T = _teichmueller(K, ghat, F, pM, M + 2)
        # rows of the canonical form, mapped into W by zeta_n -> T (Horner)
        rows = []
        for row in canon:
            acc = [0] * K.r
            for c in reversed(row):
                acc = _w_mul(acc, T, F, pM)
                acc[0] = (acc[0] + c) % pM
            rows.append(acc)
        A = _pi_division_matrix(p)
        count = 0
        exhausted = False
        while True:
            if count >= (M - 8) * 1:
                exhausted = True
                break
            new_rows = []
            ok = True
            for i in range(p - 1):
                acc = [0] * K.r
                for j in range(p - 1):
                    coef = int(A[i, j])
                    if coef:
                        rj = rows[j]
                        for k in range(K.r):
                            acc[k] = (acc[k] + coef * rj[k]) % pM
                new_rows.append(acc)
            for acc in new_rows:
                if any(c % p for c in acc):
                    ok = False
                    break
            if not ok:
                break
            rows = [[c // p for c in acc] for acc in new_rows]
            pM //= p
            count += 1
        if not exhausted:
            return Fraction(count, K.r * (p - 1))
        if M > 4096:
            raise ZeroValue("valuation exceeds supported precision; element may be 0")
        M *= 2
