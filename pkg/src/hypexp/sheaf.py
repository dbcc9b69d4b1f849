"""Trace-function engines for the two-variable exponential sums.

The central objects are the sums over a finite field K (q = #K, psi the
additive character with psi(1) = zeta_p):

    H(t) = sum_{x in K, y in K^*} psi_K(t x^D / y^N - D x + N y),   t != 0
    F(u) = sum_{x in K, y in K^*} psi_K(x^D / y^N - D x + u N y),   any u

together with the one-variable Kloosterman-type factors, Gauss sums and
their Mellin/determinant product formulas, and the pushforward matcher for
the induced D = 3, 4 cases.

Everything is exact: sums are accumulated as counts of roots of unity.
The kernels work on the field's dlog/trace tables, so the additive
character of a product is a table lookup, never a float.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np
from sympy import n_order

from .cyclo import GroupRingElement, RouCounts, complex_embed, gr_mul, to_exact_integer
from .field import FiniteField, build_field
from .kubert import _validate_params


class ZeroPoint(ValueError):
    """The trace function is only defined away from 0 for this kind."""


class OrderNotSplit(ValueError):
    """The field does not contain the required roots of unity."""


class IncompleteTable(ValueError):
    """A table operation needs values at every point of the domain."""


class BadCaseParameters(ValueError):
    """The induced-case parameters do not satisfy the case constraints."""


@dataclass(frozen=True)
class SheafParams:
    """The triple (p, N, D) with N > D > 1, gcd(N,D) = 1, gcd(ND,p) = 1."""

    p: int
    N: int
    D: int

    def __post_init__(self):
        _validate_params(self.p, self.N, self.D)


@dataclass
class TraceTable:
    """Exact trace values over a field; domain K^* except for kind F."""

    field: FiniteField
    kind: str
    values: dict         # packed element index -> RouCounts
    N: int | None = None
    D: int | None = None

    KINDS = ("H", "F", "A0", "B0", "convolution", "pushforward")

    def domain(self):
        return self.field.elements() if self.kind == "F" else self.field.units()

    def is_complete(self) -> bool:
        return all(t in self.values for t in self.domain())

    def require_complete(self):
        if not self.is_complete():
            raise IncompleteTable(f"kind-{self.kind} table is missing points")


def _psi_traces(K: FiniteField, psi_mult: int) -> np.ndarray:
    """Trace of g^k as an exponent of zeta_p, under psi(x) = zeta_p^(a Tr x)."""
    tr = K._trace_exp.astype(np.int64)
    if psi_mult % K.p != 1:
        tr = (tr * psi_mult) % K.p
    return tr


def _rou_from_bincount(counts: np.ndarray, p: int) -> RouCounts:
    return RouCounts(p, tuple(int(c) for c in counts))


# ---------------------------------------------------------------------------
# the two-variable sums
# ---------------------------------------------------------------------------

_BLOCK = 512


def trace_H(K: FiniteField, P: SheafParams, t: int, psi_mult: int = 1) -> RouCounts:
    """Exact value of sum_{x in K, y in K^*} psi_K(t x^D/y^N - Dx + Ny)."""
    if K.p != P.p:
        raise ValueError("field characteristic does not match parameters")
    if t % K.q == 0:
        raise ZeroPoint("H is defined on the torus; t must be nonzero")
    p, n = K.p, K.q - 1
    tr = _psi_traces(K, psi_mult)
    dlt = K.dlog(t)
    dcD = K.dlog(K.from_int(-P.D))
    dcN = K.dlog(K.from_int(P.N))
    i = np.arange(n, dtype=np.int64)
    cx = tr[(dcD + i) % n]               # Tr(-D g^i)
    dy = tr[(dcN + i) % n]               # Tr(N g^j)
    counts = np.bincount(dy, minlength=p).astype(np.int64)   # x = 0 row
    for start in range(0, n, _BLOCK):
        ii = i[start:start + _BLOCK]
        main = (dlt + P.D * ii[:, None] - P.N * i[None, :]) % n
        tot = (tr[main] + cx[start:start + _BLOCK, None] + dy[None, :]) % p
        counts += np.bincount(tot.ravel(), minlength=p)
    return _rou_from_bincount(counts, p)


def trace_F(K: FiniteField, P: SheafParams, u: int, psi_mult: int = 1) -> RouCounts:
    """Exact value of sum_{x in K, y in K^*} psi_K(x^D/y^N - Dx + uNy)."""
    if K.p != P.p:
        raise ValueError("field characteristic does not match parameters")
    p, n = K.p, K.q - 1
    tr = _psi_traces(K, psi_mult)
    dcD = K.dlog(K.from_int(-P.D))
    i = np.arange(n, dtype=np.int64)
    cx = tr[(dcD + i) % n]
    counts = np.zeros(p, dtype=np.int64)
    if u % K.q == 0:
        dy = None
        counts[0] += n                    # x = 0 row: psi(0) per y
    else:
        uN = K.mul(u, K.from_int(P.N))
        dy = tr[(K.dlog(uN) + i) % n]
        counts += np.bincount(dy, minlength=p)
    for start in range(0, n, _BLOCK):
        ii = i[start:start + _BLOCK]
        main = (P.D * ii[:, None] - P.N * i[None, :]) % n
        tot = tr[main] + cx[start:start + _BLOCK, None]
        if dy is not None:
            tot = tot + dy[None, :]
        counts += np.bincount((tot % p).ravel(), minlength=p)
    return _rou_from_bincount(counts, p)


def normalized_trace(v: RouCounts, q: int, twists: int) -> Fraction:
    """to_exact_integer(v) / q^twists, as an exact rational."""
    return Fraction(to_exact_integer(v), q ** twists)


def frobenius_trace_sequence(P: SheafParams, t: int, kmax: int,
                             fields: list | None = None,
                             psi_mult: int = 1) -> list:
    """Normalized traces over the tower GF(p^k), k = 1..kmax, at a
    prime-field point t (so no embedding is needed along the tower)."""
    if t % P.p == 0:
        raise ZeroPoint("t must be a nonzero prime-field point")
    seq = []
    for k in range(1, kmax + 1):
        K = fields[k - 1] if fields is not None else build_field(P.p, k)
        v = trace_H(K, P, K.from_int(t), psi_mult=psi_mult)
        seq.append(normalized_trace(v, K.q, 1))
    return seq


# ---------------------------------------------------------------------------
# Gauss sums and twisting factors
# ---------------------------------------------------------------------------

def gauss_sum(K: FiniteField, e: int, conjugate_psi: bool = False,
              n: int | None = None, psi_mult: int = 1) -> GroupRingElement:
    """sum_{x != 0} psi_K^{+-}(x) chi_e(x), exactly, in Z[Z/p x Z/n].

    n defaults to q-1; any n with n | q-1 and chi_e^n trivial may be used
    instead to keep the ring small (e.g. n = N for order-N characters).
    """
    p, q = K.p, K.q
    if n is None:
        n = q - 1
    if (q - 1) % n != 0:
        raise OrderNotSplit(f"n = {n} does not divide q - 1 = {q - 1}")
    s = (q - 1) // n
    e = e % (q - 1)
    if e % s != 0:
        raise OrderNotSplit(f"character exponent {e} does not lie in Z[zeta_{n}]")
    tr = _psi_traces(K, psi_mult)
    a = (-tr) % p if conjugate_psi else tr
    k = np.arange(q - 1, dtype=np.int64)
    b = ((e // s) * k) % n
    flat = np.bincount(a * n + b, minlength=p * n)
    return GroupRingElement(p, n, flat.reshape(p, n))


def twisting_factor(K: FiniteField, M: int, conjugate_psi: bool = False,
                    exclude_trivial: bool = False,
                    psi_mult: int = 1) -> GroupRingElement:
    """Product over characters rho with rho^M = 1 of (-Gauss(psi^{+-}, rho))."""
    q = K.q
    if (q - 1) % M != 0:
        raise OrderNotSplit(f"M = {M} does not divide q - 1 = {q - 1}")
    acc = GroupRingElement.integer(K.p, q - 1, 1)
    for k in range(M):
        if k == 0 and exclude_trivial:
            continue
        g = gauss_sum(K, k * (q - 1) // M, conjugate_psi=conjugate_psi,
                      psi_mult=psi_mult)
        acc = gr_mul(acc, -g)
    return acc


# ---------------------------------------------------------------------------
# Kloosterman factors and multiplicative convolution
# ---------------------------------------------------------------------------

def _nth_root_fiber(K: FiniteField, N: int, t: int) -> list:
    """All y in K^* with y^N = t, via discrete logs."""
    n = K.q - 1
    dlt = K.dlog(t)
    g = gcd(N, n)
    if dlt % g:
        return []
    step = n // g
    j0 = (dlt // g) * pow(N // g, -1, step) % step
    return [int(K._exp[(j0 + m * step) % n]) for m in range(g)]


def kloosterman_A0_trace(K: FiniteField, N: int, t: int,
                         psi_mult: int = 1) -> RouCounts:
    """sum over the fiber {y : y^N = t} of psi_K(N y)."""
    if t % K.q == 0:
        raise ZeroPoint("t must be nonzero")
    p = K.p
    cN = K.from_int(N)
    counts = [0] * p
    for y in _nth_root_fiber(K, N, t):
        counts[(psi_mult * K.trace(K.mul(cN, y))) % p] += 1
    return RouCounts(p, counts)


def kloosterman_B0_trace(K: FiniteField, D: int, t: int,
                         psi_mult: int = 1) -> RouCounts:
    """-(sum_{x in K} psi_K(x^D/t - Dx)), the minus sign kept exactly."""
    if t % K.q == 0:
        raise ZeroPoint("t must be nonzero")
    p, n = K.p, K.q - 1
    tr = _psi_traces(K, psi_mult)
    i = np.arange(n, dtype=np.int64)
    dcD = K.dlog(K.from_int(-D))
    cx = tr[(dcD + i) % n]
    main = (D * i - K.dlog(t)) % n
    counts = np.bincount((tr[main] + cx) % p, minlength=p).astype(np.int64)
    counts[0] += 1                        # x = 0 term: psi(0)
    return _rou_from_bincount(-counts, p)


@lru_cache(maxsize=32)
def _a0_table(K: FiniteField, N: int, psi_mult: int):
    return {t: kloosterman_A0_trace(K, N, t, psi_mult) for t in K.units()}


@lru_cache(maxsize=32)
def _b0_table(K: FiniteField, D: int, psi_mult: int):
    return {t: kloosterman_B0_trace(K, D, t, psi_mult) for t in K.units()}


def convolution_trace(K: FiniteField, P: SheafParams, u: int,
                      psi_mult: int = 1) -> RouCounts:
    """minus the multiplicative convolution of A0 and inv*B0 at u.

    Assembled purely from the two Kloosterman traces; equals trace_H(K, P, u)
    by the product structure of the double sum.
    """
    if u % K.q == 0:
        raise ZeroPoint("u must be nonzero")
    a0 = _a0_table(K, P.N, psi_mult)
    b0 = _b0_table(K, P.D, psi_mult)
    u_inv = K.inv(u)
    acc = RouCounts.zero(K.p)
    for s in K.units():
        acc = acc + a0[s] * b0[K.mul(s, u_inv)]
    return -acc


# ---------------------------------------------------------------------------
# trace tables
# ---------------------------------------------------------------------------

def build_h_table(K: FiniteField, P: SheafParams, psi_mult: int = 1) -> TraceTable:
    vals = {t: trace_H(K, P, t, psi_mult) for t in K.units()}
    return TraceTable(K, "H", vals, P.N, P.D)


def build_f_table(K: FiniteField, P: SheafParams, psi_mult: int = 1) -> TraceTable:
    vals = {t: trace_F(K, P, t, psi_mult) for t in K.elements()}
    return TraceTable(K, "F", vals, P.N, P.D)


def build_a0_table(K: FiniteField, N: int, psi_mult: int = 1) -> TraceTable:
    return TraceTable(K, "A0", dict(_a0_table(K, N, psi_mult)), N=N)


def build_b0_table(K: FiniteField, D: int, psi_mult: int = 1) -> TraceTable:
    return TraceTable(K, "B0", dict(_b0_table(K, D, psi_mult)), D=D)


def build_convolution_table(K: FiniteField, P: SheafParams, psi_mult: int = 1) -> TraceTable:
    vals = {u: convolution_trace(K, P, u, psi_mult) for u in K.units()}
    return TraceTable(K, "convolution", vals, P.N, P.D)


def table_to_csv(table: TraceTable) -> str:
    """CSV with a JSON header line; nonzero t is written as its dlog
    exponent in [1, q-1] (t = 1 maps to q-1, so "0" always means t = 0)."""
    K = table.field
    header = {"p": K.p, "r": K.r, "modulus": list(K.modulus),
              "generator": K.generator, "kind": table.kind,
              "N": table.N, "D": table.D}
    sample = next(iter(table.values.values()))
    if sample.p != K.p:
        header["rou_order"] = sample.p
    lines = ["#" + json.dumps(header, sort_keys=True)]
    for t in sorted(table.values):
        v = table.values[t]
        if t == 0:
            code = 0
        else:
            code = K.dlog(t) or K.q - 1
        lines.append(",".join([str(code)] + [str(c) for c in v.counts]))
    return "\n".join(lines) + "\n"


def table_from_csv(text: str) -> TraceTable:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    header = json.loads(lines[0].lstrip("#"))
    K = build_field(header["p"], header["r"], modulus=header["modulus"],
                    generator=header["generator"])
    rou = header.get("rou_order", K.p)
    vals = {}
    for ln in lines[1:]:
        parts = [int(x) for x in ln.split(",")]
        code, counts = parts[0], parts[1:]
        t = 0 if code == 0 else int(K._exp[code % (K.q - 1)])
        vals[t] = RouCounts(rou, counts)
    return TraceTable(K, header["kind"], vals, header.get("N"), header.get("D"))


# ---------------------------------------------------------------------------
# Mellin transform and product formula
# ---------------------------------------------------------------------------

def mellin_value(K: FiniteField, table: TraceTable, e: int) -> GroupRingElement:
    """sum_{t in K^*} trace(t) chi_e(t), exact in Z[Z/p x Z/(q-1)]."""
    if table.kind != "H":
        raise ValueError("Mellin values are taken on kind-H tables")
    table.require_complete()
    p, n = K.p, K.q - 1
    arr = np.zeros((p, n), dtype=np.int64)
    for t in K.units():
        b = (e * K.dlog(t)) % n
        arr[:, b] += table.values[t].counts
    return GroupRingElement(p, n, arr)


def mellin_product_formula(K: FiniteField, P: SheafParams, e: int,
                           psi_mult: int = 1) -> GroupRingElement:
    """(-1)^(N-D) prod_{rho^N=1} Gauss(psi, chi_e rho)
    * prod_{sigma^D=1, sigma != 1} Gauss(psi-bar, conj(chi_e sigma))."""
    q = K.q
    if (q - 1) % (P.N * P.D) != 0:
        raise OrderNotSplit(f"ND = {P.N * P.D} does not divide q - 1")
    acc = GroupRingElement.integer(K.p, q - 1, (-1) ** (P.N - P.D))
    for m in range(P.N):
        acc = gr_mul(acc, gauss_sum(K, (e + m * (q - 1) // P.N) % (q - 1),
                                    psi_mult=psi_mult))
    for k in range(1, P.D):
        acc = gr_mul(acc, gauss_sum(K, (-(e + k * (q - 1) // P.D)) % (q - 1),
                                    conjugate_psi=True, psi_mult=psi_mult))
    return acc


# ---------------------------------------------------------------------------
# Frobenius eigenvalues at t = 0 of the pullback system, and the determinant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Eigenvalue:
    """Exact numerator with a separate exact scalar; value = numerator/scale."""

    numerator: GroupRingElement
    scale: int

    def embed(self, rou_p: int = 1, rou_n: int = 1) -> complex:
        z, _ = complex_embed(self.numerator, rou_p, rou_n)
        return z / self.scale

    def is_exact_one(self) -> bool:
        return self.scale == 1 and self.numerator == GroupRingElement.integer(
            self.numerator.p, self.numerator.n, 1)


@dataclass
class EigenvalueList:
    params: SheafParams
    d: int
    values: list

    def product_embed(self) -> complex:
        out = 1 + 0j
        for ev in self.values:
            out *= ev.embed()
        return out


def frob_zero_eigenvalues(P: SheafParams, d: int, psi_mult: int = 1) -> EigenvalueList:
    """The N Frobenius eigenvalues at t = 0 over GF(p^d) after one twist:
    exactly 1, and for each nontrivial rho^N = 1 the product
    rho^D(D) Gauss(psi-bar, rho-bar^D) Gauss(psi, rho) / p^d."""
    q = P.p ** d
    if (q - 1) % P.N != 0:
        raise OrderNotSplit(f"N = {P.N} does not divide p^d - 1 = {q - 1}")
    K = build_field(P.p, d)
    dlD = K.dlog(K.from_int(P.D))
    evs = [Eigenvalue(GroupRingElement.integer(P.p, P.N, 1), 1)]
    for m in range(1, P.N):
        e_rho = m * (q - 1) // P.N
        g1 = gauss_sum(K, (-e_rho * P.D) % (q - 1), conjugate_psi=True,
                       n=P.N, psi_mult=psi_mult)
        g2 = gauss_sum(K, e_rho, n=P.N, psi_mult=psi_mult)
        num = gr_mul(g1, g2)
        rot = GroupRingElement.monomial(P.p, P.N, 0, (m * P.D * dlD) % P.N)
        evs.append(Eigenvalue(gr_mul(rot, num), q))
    return EigenvalueList(P, d, evs)


def determinant_sign(P: SheafParams):
    """Sign of A^d per the determinant case table; 'not-covered' unless
    D = N + 1 mod p - 1."""
    if (P.D - P.N - 1) % (P.p - 1) != 0:
        return "not-covered"
    if P.N % 2 == 1:
        return 1
    d = n_order(P.p, P.N)
    if d % 2 == 0 or pow(P.D % P.p, (P.p - 1) // 2, P.p) == 1:
        return 1
    return -1


# ---------------------------------------------------------------------------
# induced pushforward cases (D = 3 and D = 4)
# ---------------------------------------------------------------------------

def _check_case(K: FiniteField, case: str, q0: int):
    def is_power_of_p(v):
        if v < K.p:
            return False
        while v % K.p == 0:
            v //= K.p
        return v == 1

    if case not in ("D3", "D4a", "D4b"):
        raise BadCaseParameters(f"unknown case {case!r}")
    if not is_power_of_p(q0):
        raise BadCaseParameters(f"q0 = {q0} is not a power of p = {K.p}")
    if case == "D3":
        if q0 % 3 != 1:
            raise BadCaseParameters("case D3 needs q0 = 1 mod 3")
        if (K.q - 1) % 3 != 0:
            raise BadCaseParameters("case D3 needs cube characters in K")
    elif K.p == 2:
        raise BadCaseParameters("D = 4 cases need odd characteristic")


def case_params(case: str, q0: int) -> tuple:
    """(N, D) realized by the induced case."""
    return {"D3": (q0 + 1, 3), "D4a": (2 * q0 + 1, 4), "D4b": (q0 + 2, 4)}[case]


@lru_cache(maxsize=16)
def build_pushforward_table(K: FiniteField, case: str, q0: int,
                            chars: tuple = (1, 2)) -> TraceTable:
    """Trace table of the pushforward of the case's rank-one input sheaf.

    For D3 the rank-one input is chi_3^a(u) chi_3^b(u-1) with (a, b) = chars
    (values are counts of cube roots of unity); for the D4 cases it is
    chi_2(u(u-1)) with integer values.
    """
    _check_case(K, case, q0)
    exps = {"D3": (q0, 1), "D4a": (2 * q0, 1), "D4b": (q0, 2)}[case]
    rou = 3 if case == "D3" else K.p
    vals = {t: RouCounts.zero(rou) for t in K.units()}
    n = K.q - 1
    one = 1
    for u in K.units():
        if u == one:
            continue
        um1 = K.sub(u, one)
        denom = K.mul(K.pow_el(u, exps[0]), K.pow_el(um1, exps[1]))
        t = K.inv(denom)
        if case == "D3":
            a, b = chars
            j = (a * K.dlog(u) + b * K.dlog(um1)) % 3
            vals[t] = vals[t] + RouCounts.single(3, j)
        else:
            sign = 1 if (K.dlog(K.mul(u, um1)) % 2) == 0 else -1
            vals[t] = vals[t] + RouCounts.integer(K.p, sign)
    N, D = case_params(case, q0)
    return TraceTable(K, "pushforward", vals, N, D)


def induced_pushforward_trace(K: FiniteField, case: str, q0: int,
                              chars: tuple, t: int) -> RouCounts:
    """Single point of the pushforward trace; see build_pushforward_table."""
    if t % K.q == 0:
        raise ZeroPoint("t must be nonzero")
    return build_pushforward_table(K, case, q0, tuple(chars)).values[t % K.q]


@dataclass
class TranslateTwistMatch:
    s: int
    alpha: complex
    residual: float


def match_up_to_translate_twist(A: TraceTable, B: TraceTable,
                                tol: float = 1e-6):
    """Search s in K^* and a constant alpha with A(t) = alpha B(st) for all t.

    alpha is fitted at the first point where both sides are nonzero; the
    residual is the max deviation relative to the scale of A.  Returns the
    first match in packed order of s, or None.
    """
    if A.field != B.field:
        raise ValueError("tables over different fields")
    K = A.field
    A.require_complete()
    B.require_complete()
    av = {t: complex_embed(A.values[t])[0] for t in K.units()}
    bv = {t: complex_embed(B.values[t])[0] for t in K.units()}
    scale = max(max(abs(z) for z in av.values()), 1.0)
    for s in K.units():
        alpha = None
        for t in K.units():
            if abs(av[t]) > tol * scale and abs(bv[K.mul(s, t)]) > tol * scale:
                alpha = av[t] / bv[K.mul(s, t)]
                break
        if alpha is None:
            continue
        residual = max(abs(av[t] - alpha * bv[K.mul(s, t)]) for t in K.units()) / scale
        if residual <= tol:
            return TranslateTwistMatch(s, alpha, residual)
    return None
