"""Finite fields GF(p^r) with additive/multiplicative character evaluation.

Elements are stored as packed integers: the element with polynomial-basis
coefficients (c_0, ..., c_{r-1}) is the integer sum(c_i * p**i).  All
coefficients are kept reduced mod p, so the packing is a bijection onto
range(p**r) and equality of elements is equality of integers.

For fields with at most TABLE_LIMIT elements (default 2**25) the constructor
builds full discrete-log, exponential and trace tables as numpy arrays; the
exponential-sum kernels in `hypexp.sheaf` index into these directly.  Larger
fields fall back to polynomial arithmetic and baby-step/giant-step logs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from sympy import factorint, isprime

TABLE_LIMIT = 1 << 25


class NonPrime(ValueError):
    """The requested characteristic is not a prime number."""


class ReducibleModulus(ValueError):
    """The supplied modulus polynomial is not irreducible over GF(p)."""


class ZeroArgument(ValueError):
    """A multiplicative operation was applied to the zero element."""


# ---------------------------------------------------------------------------
# polynomial arithmetic over GF(p), coefficient lists in little-endian order
# ---------------------------------------------------------------------------

def _trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, f, p):
    a = list(a)
    df = len(f) - 1
    inv_lead = pow(f[-1], -1, p)
    for i in range(len(a) - 1, df - 1, -1):
        c = a[i] % p
        if c:
            q = (c * inv_lead) % p
            for j in range(df + 1):
                a[i - df + j] = (a[i - df + j] - q * f[j]) % p
    del a[df:]
    while len(a) < df:
        a.append(0)
    return a


def _poly_mulmod(a, b, f, p):
    out = [0] * (len(a) + len(b) - 1) if a and b else [0]
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _poly_mod(out, f, p)


def _poly_powmod(a, e, f, p):
    df = len(f) - 1
    result = [1]
    base = _poly_mod(list(a), f, p)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, f, p)
        base = _poly_mulmod(base, base, f, p)
        e >>= 1
    result = list(result) + [0] * (df - len(result))
    return result[:df]


def _poly_gcd(a, b, p):
    a, b = _trim(list(a)), _trim(list(b))
    while b:
        inv_lead = pow(b[-1], -1, p)
        r = list(a)
        for i in range(len(r) - 1, len(b) - 2, -1):
            c = r[i] % p
            if c:
                q = (c * inv_lead) % p
                for j in range(len(b)):
                    r[i - len(b) + 1 + j] = (r[i - len(b) + 1 + j] - q * b[j]) % p
        a, b = b, _trim(r)
    return a


def _is_irreducible(f, p):
    """Rabin test: x^(p^r) = x mod f and gcd(x^(p^(r/l)) - x, f) = 1."""
    r = len(f) - 1
    if r == 1:
        return True
    if f[0] == 0:
        return False
    powers = {}
    t = [0, 1]
    for j in range(1, r + 1):
        t = _poly_powmod(t, p, f, p)
        powers[j] = t
    top = list(powers[r])
    top[1] = (top[1] - 1) % p
    if _trim(top):
        return False
    for ell in set(factorint(r)):
        g = list(powers[r // ell])
        g[1] = (g[1] - 1) % p
        g = _trim(g)
        if not g:
            return False  # x^(p^(r/ell)) = x mod f: f splits over the subfield
        if len(_poly_gcd(f, g, p)) - 1 > 0:
            return False
    return True


def _unpack(idx, p, r):
    coeffs = []
    for _ in range(r):
        idx, c = divmod(idx, p)
        coeffs.append(c)
    return coeffs


def _pack(coeffs, p):
    v = 0
    for c in reversed(coeffs):
        v = v * p + (c % p)
    return v


class FiniteField:
    """GF(p^r) with a verified irreducible modulus and a verified generator.

    Immutable after construction; all operations are pure, so instances can
    be shared freely across threads.
    """

    def __init__(self, p: int, r: int, modulus=None, generator: int | None = None,
                 table_limit: int = TABLE_LIMIT):
        if not isprime(p):
            raise NonPrime(f"p = {p} is not prime")
        if r < 1:
            raise ValueError(f"extension degree must be >= 1, got {r}")
        self.p = int(p)
        self.r = int(r)
        self.q = self.p ** self.r

        if modulus is not None:
            modulus = [c % p for c in modulus]
            if len(_trim(list(modulus))) - 1 != r or modulus[-1] != 1:
                raise ValueError("modulus must be monic of degree r")
            if not _is_irreducible(modulus, p):
                raise ReducibleModulus(f"{modulus} is reducible over GF({p})")
            self.modulus = tuple(modulus)
        else:
            self.modulus = tuple(self._smallest_irreducible())

        # x^(r+j) mod modulus for j = 0..r-2, to reduce schoolbook products
        self._red = []
        cur = [(-c) % p for c in self.modulus[:-1]]
        for _ in range(r - 1):
            self._red.append(list(cur))
            cur = [0] + cur
            top = cur.pop()
            if top:
                for j in range(r):
                    cur[j] = (cur[j] - top * self.modulus[j]) % p

        self._factors_q1 = sorted(factorint(self.q - 1)) if self.q > 2 else []

        if generator is not None:
            if not self._has_full_order(generator):
                raise ValueError(f"element {generator} does not generate the unit group")
            self.generator = generator
        else:
            self.generator = self._find_generator()

        self.has_tables = self.q <= table_limit
        if self.has_tables:
            self._build_tables()

    # -- construction helpers ------------------------------------------------

    def _smallest_irreducible(self):
        p, r = self.p, self.r
        if r == 1:
            return [0, 1]
        for k in range(p ** r):
            f = _unpack(k, p, r) + [1]
            if f[0] == 0:
                continue
            if _is_irreducible(f, p):
                return f
        raise AssertionError("no irreducible polynomial found")  # unreachable

    def _mul_raw(self, a: int, b: int) -> int:
        """Product of two packed elements via schoolbook + reduction."""
        p, r = self.p, self.r
        ca, cb = _unpack(a, p, r), _unpack(b, p, r)
        prod = [0] * (2 * r - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        out = prod[:r]
        for j in range(r - 1):
            c = prod[r + j]
            if c:
                red = self._red[j]
                for i in range(r):
                    out[i] = (out[i] + c * red[i]) % p
        return _pack(out, p)

    def _pow_raw(self, a: int, e: int) -> int:
        result = 1
        base = a
        while e:
            if e & 1:
                result = self._mul_raw(result, base)
            base = self._mul_raw(base, base)
            e >>= 1
        return result

    def _x_times(self, a: int) -> int:
        """Multiply a packed element by x (one basis shift)."""
        p, r = self.p, self.r
        coeffs = _unpack(a, p, r)
        top = coeffs.pop()
        coeffs = [0] + coeffs
        if top:
            red = self._red[0]
            for i in range(r):
                coeffs[i] = (coeffs[i] + top * red[i]) % p
        return _pack(coeffs, p)

    def _has_full_order(self, g: int) -> bool:
        if g == 0:
            return False
        if self.q == 2:
            return g == 1
        for ell in self._factors_q1:
            if self._pow_raw(g, (self.q - 1) // ell) == 1:
                return False
        return True

    def _find_generator(self) -> int:
        for g in range(1, self.q):
            if self._has_full_order(g):
                return g
        raise AssertionError("no generator found")  # unreachable

    def _build_tables(self):
        p, r, q = self.p, self.r, self.q
        n = q - 1
        # exp table in baby/giant blocks: exp[a + b*s] = g^a * (g^s)^b
        s = max(1, math.isqrt(n))
        babies = np.zeros((r, s), dtype=np.int64)
        cur = 1
        for a in range(s):
            babies[:, a] = _unpack(cur, p, r)
            cur = self._mul_raw(cur, self.generator)
        h = self._pow_raw(self.generator, s)
        mat = np.zeros((r, r), dtype=np.int64)
        col = h
        for i in range(r):
            mat[:, i] = _unpack(col, p, r)
            if i + 1 < r:
                col = self._x_times(col)
        pows = np.array([p ** i for i in range(r)], dtype=np.int64)
        blocks = []
        X = babies
        total = 0
        while total < n:
            blocks.append(pows @ X)
            total += s
            if total < n:
                X = (mat @ X) % p
        exp = np.concatenate(blocks)[:n]
        self._exp = exp
        dlog = np.full(q, -1, dtype=np.int64)
        dlog[exp] = np.arange(n, dtype=np.int64)
        self._dlog = dlog
        if n > 1:
            assert dlog[self.generator] == 1 and dlog[1] == 0

        # trace of basis powers x^i from Frobenius iterates of x
        if r == 1:
            tr_basis = np.array([1], dtype=np.int64)
        else:
            f = list(self.modulus)
            frob = []
            t = [0, 1] + [0] * (r - 2)
            for _ in range(r):
                frob.append(t)
                t = _poly_powmod(t, p, f, p)
            basis = []
            for i in range(r):
                acc = [0] * r
                for fj in frob:
                    term = _poly_powmod(fj, i, f, p)
                    for k in range(r):
                        acc[k] = (acc[k] + term[k]) % p
                assert not any(acc[1:]), "trace of basis element not in GF(p)"
                basis.append(acc[0])
            tr_basis = np.array(basis, dtype=np.int64)

        digits = np.zeros((q, r), dtype=np.int8)
        idx = np.arange(q, dtype=np.int64)
        for i in range(r):
            digits[:, i] = idx % p
            idx //= p
        self._digits = digits
        self._trace = ((digits.astype(np.int64) @ tr_basis) % p).astype(np.int8)
        self._trace_exp = self._trace[self._exp]

    # -- arithmetic on packed indices ----------------------------------------

    def add(self, a: int, b: int) -> int:
        p = self.p
        ca, cb = _unpack(a, p, self.r), _unpack(b, p, self.r)
        return _pack([(x + y) % p for x, y in zip(ca, cb)], p)

    def neg(self, a: int) -> int:
        p = self.p
        return _pack([(-c) % p for c in _unpack(a, p, self.r)], p)

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.has_tables:
            return int(self._exp[(self._dlog[a] + self._dlog[b]) % (self.q - 1)])
        return self._mul_raw(a, b)

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroArgument("zero has no inverse")
        if self.has_tables:
            return int(self._exp[(-self._dlog[a]) % (self.q - 1)])
        return self._pow_raw(a, self.q - 2)

    def pow_el(self, a: int, e: int) -> int:
        if a == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroArgument("negative power of zero")
            return 0
        if self.has_tables:
            return int(self._exp[(self._dlog[a] * e) % (self.q - 1)])
        return self._pow_raw(a, e % (self.q - 1))

    def from_int(self, c: int) -> int:
        """Embed an integer via the prime subfield."""
        return c % self.p

    def trace(self, a: int) -> int:
        """Trace down to GF(p), as an integer in [0, p)."""
        if self.has_tables:
            return int(self._trace[a])
        acc = [0] * self.r
        t = a
        for _ in range(self.r):
            coeffs = _unpack(t, self.p, self.r)
            for k in range(self.r):
                acc[k] = (acc[k] + coeffs[k]) % self.p
            t = self._pow_raw(t, self.p)
        assert not any(acc[1:])
        return acc[0]

    def dlog(self, a: int) -> int:
        if a == 0:
            raise ZeroArgument("discrete log of zero")
        if self.has_tables:
            return int(self._dlog[a])
        return self._dlog_bsgs(a)

    def _dlog_bsgs(self, a: int) -> int:
        n = self.q - 1
        m = math.isqrt(n) + 1
        table = {}
        cur = 1
        for j in range(m):
            table.setdefault(cur, j)
            cur = self._mul_raw(cur, self.generator)
        gm_inv = self._pow_raw(self.inv(self.generator), m)
        cur = a
        for i in range(m + 1):
            if cur in table:
                return (i * m + table[cur]) % n
            cur = self._mul_raw(cur, gm_inv)
        raise AssertionError("BSGS failed; generator invariant violated")

    def coeffs(self, a: int):
        """Polynomial-basis coefficients of a packed element."""
        return tuple(_unpack(a, self.p, self.r))

    def elements(self):
        return range(self.q)

    def units(self):
        return range(1, self.q)

    def element(self, idx: int) -> "FieldElement":
        return FieldElement(self, idx % self.q)

    def __repr__(self):
        return f"GF({self.p}^{self.r})" if self.r > 1 else f"GF({self.p})"

    def __eq__(self, other):
        return (isinstance(other, FiniteField)
                and (self.p, self.r, self.modulus, self.generator)
                == (other.p, other.r, other.modulus, other.generator))

    def __hash__(self):
        return hash((self.p, self.r, self.modulus, self.generator))


@dataclass(frozen=True)
class FieldElement:
    """Thin operator wrapper over a packed element index."""

    field: FiniteField
    idx: int

    @property
    def coeffs(self):
        return self.field.coeffs(self.idx)

    def _idx_of(self, other) -> int:
        if isinstance(other, FieldElement):
            return other.idx
        return self.field.from_int(other)

    def __add__(self, other):
        return FieldElement(self.field, self.field.add(self.idx, self._idx_of(other)))

    def __sub__(self, other):
        return FieldElement(self.field, self.field.sub(self.idx, self._idx_of(other)))

    def __mul__(self, other):
        return FieldElement(self.field, self.field.mul(self.idx, self._idx_of(other)))

    def __truediv__(self, other):
        return FieldElement(self.field,
                            self.field.mul(self.idx, self.field.inv(self._idx_of(other))))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.idx))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow_el(self.idx, e))

    def is_zero(self) -> bool:
        return self.idx == 0

    def trace(self) -> int:
        return self.field.trace(self.idx)

    def __repr__(self):
        return f"{self.field!r}[{self.idx}]"


# ---------------------------------------------------------------------------
# spec-level operations
# ---------------------------------------------------------------------------

@lru_cache(maxsize=64)
def _cached_field(p, r, modulus, generator, table_limit):
    return FiniteField(p, r, modulus=list(modulus) if modulus else None,
                       generator=generator, table_limit=table_limit)


def build_field(p: int, r: int, modulus=None, generator: int | None = None,
                table_limit: int = TABLE_LIMIT) -> FiniteField:
    """Construct (and cache) GF(p^r).

    When no modulus is given, the lexicographically smallest monic
    irreducible of degree r is chosen; the generator defaults to the
    smallest element (in packed-index order) of full multiplicative order.
    """
    key = tuple(modulus) if modulus is not None else None
    return _cached_field(p, r, key, generator, table_limit)


def _as_idx(K: FiniteField, x) -> int:
    return x.idx if isinstance(x, FieldElement) else int(x)


def trace_to_base(K: FiniteField, x) -> int:
    """Tr_{K/F_p}(x) = x + x^p + ... + x^(p^(r-1)), in [0, p)."""
    return K.trace(_as_idx(K, x))


def additive_char_index(K: FiniteField, x) -> int:
    """Exponent a with psi_K(x) = zeta_p^a, normalized by psi(1) = zeta_p."""
    return K.trace(_as_idx(K, x))


def discrete_log(K: FiniteField, x) -> int:
    """Exponent k with generator^k = x; table lookup or BSGS."""
    return K.dlog(_as_idx(K, x))


def mult_char_value(K: FiniteField, e: int, x) -> int:
    """Exponent of zeta_{q-1} for chi_e(x) = zeta_{q-1}^(e * dlog x)."""
    idx = _as_idx(K, x)
    if idx == 0:
        raise ZeroArgument("multiplicative characters are not evaluated at 0")
    if not 0 <= e < K.q - 1 and K.q > 2:
        raise ValueError(f"character exponent {e} out of range [0, {K.q - 1})")
    return (e * K.dlog(idx)) % (K.q - 1)
