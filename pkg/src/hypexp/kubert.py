"""Base-p digit arithmetic, bracket functions, and Kubert's V-function.

V is computed purely from digit sums: for x = k/(p^r - 1) nonzero,
V(x) = 1 - [-k]_r / (r (p-1)), where [m]_r is the base-p digit sum of the
representative of m mod p^r - 1 chosen in [1, p^r - 1].  The finiteness
criterion V(Nx) + V(-Dx) + V(x) >= 1 is checked exhaustively per level,
with one representative per multiply-by-p digit-rotation orbit.

All scans run on numpy integer arrays; digit sums never trust transcribed
digit strings, only integer arithmetic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

import numpy as np
from sympy import isprime, n_order


def _validate_params(p: int, N: int, D: int):
    if not isprime(p):
        raise ValueError(f"p = {p} is not prime")
    if not N > D > 1:
        raise ValueError(f"need N > D > 1, got N={N}, D={D}")
    if gcd(N, D) != 1:
        raise ValueError(f"gcd(N,D)=1 violated: gcd({N},{D}) = {gcd(N, D)}")
    if (N * D) % p == 0:
        raise ValueError(f"gcd(ND,p)=1 violated: p={p} divides N*D")


def digit_sum(n: int, p: int) -> int:
    """Sum of the base-p digits of a nonnegative integer."""
    if n < 0:
        raise ValueError("digit_sum needs a nonnegative integer")
    s = 0
    while n:
        n, d = divmod(n, p)
        s += d
    return s


def _digit_sum_array(v: np.ndarray, p: int) -> np.ndarray:
    """Vectorized base-p digit sums (values must be nonnegative)."""
    v = v.astype(np.int64).copy()
    out = np.zeros_like(v)
    while v.any():
        out += v % p
        v //= p
    return out


def bracket_r(x: int, p: int, r: int) -> int:
    """Digit sum of the representative of x mod p^r - 1 in [1, p^r - 1]."""
    M = p ** r - 1
    m = x % M
    if m == 0:
        m = M
    return digit_sum(m, p)


def _bracket_array(x: np.ndarray, p: int, r: int) -> np.ndarray:
    M = p ** r - 1
    m = x % M
    m[m == 0] = M
    return _digit_sum_array(m, p)


@dataclass(frozen=True)
class QZElement:
    """x = k/(p^r - 1) in (Q/Z) prime to p."""

    p: int
    r: int
    k: int

    @classmethod
    def from_fraction(cls, p: int, x: Fraction) -> "QZElement":
        x = Fraction(x) % 1
        if gcd(x.denominator, p) != 1:
            raise ValueError(f"denominator {x.denominator} not prime to p={p}")
        if x.denominator == 1:
            return cls(p, 1, 0)
        r = n_order(p, x.denominator)
        M = p ** r - 1
        return cls(p, r, x.numerator * (M // x.denominator) % M)

    def as_fraction(self) -> Fraction:
        return Fraction(self.k, self.p ** self.r - 1) % 1

    def __eq__(self, other):
        if not isinstance(other, QZElement):
            return NotImplemented
        return self.p == other.p and self.as_fraction() == other.as_fraction()

    def __hash__(self):
        return hash((self.p, self.as_fraction()))


def kubert_V(x: QZElement) -> Fraction:
    """Kubert's V-function, V(0) = 0, values in [0, 1)."""
    L = x.r * (x.p - 1)
    return 1 - Fraction(bracket_r(-x.k, x.p, x.r), L)


def kubert_V_fraction(p: int, x) -> Fraction:
    """V evaluated at an arbitrary rational x prime to p."""
    return kubert_V(QZElement.from_fraction(p, Fraction(x)))


# ---------------------------------------------------------------------------
# finiteness criterion
# ---------------------------------------------------------------------------

@dataclass
class CriterionReport:
    p: int
    N: int
    D: int
    r_max: int
    violations: list = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "pass" if not self.violations else "fail"

    def to_json(self) -> str:
        return json.dumps({
            "p": self.p, "N": self.N, "D": self.D, "r_max": self.r_max,
            "verdict": self.verdict,
            "violations": [{"r": r, "k": k} for r, k in self.violations],
        }, sort_keys=True)


def _orbit_representatives(M: int, p: int, r: int) -> np.ndarray:
    """k in [1, M) that are minimal in their multiply-by-p orbit mod M."""
    arr = np.arange(1, M, dtype=np.int64)
    cur = arr.copy()
    mn = arr.copy()
    for _ in range(r - 1):
        cur = (cur * p) % M
        np.minimum(mn, cur, out=mn)
    return arr[mn == arr]


def _criterion_sums(ks: np.ndarray, p: int, N: int, D: int, r: int) -> np.ndarray:
    """L*(V(Nx) + V(-Dx) + V(x)) for x = k/M, as integers (L = r(p-1))."""
    L = r * (p - 1)
    total = (3 * L
             - _bracket_array(-N * ks, p, r)
             - _bracket_array(D * ks, p, r)
             - _bracket_array(-ks, p, r))
    return total


def _violations_at_level(p: int, N: int, D: int, r: int) -> list:
    M = p ** r - 1
    reps = _orbit_representatives(M, p, r)
    L = r * (p - 1)
    bad = reps[_criterion_sums(reps, p, N, D, r) < L]
    return [(r, int(k)) for k in bad]


def _bracket_form_agrees(p: int, N: int, D: int, r: int) -> bool:
    """Pointwise verdict agreement of the V-form and bracket-form conditions.

    The bracket condition at integer x corresponds to the V-form condition at
    k = (-x - h) mod M (h = M/2), through the duplication-formula chain; the
    boundary point with k = 0 is outside the V-form scan and is skipped.
    """
    M = p ** r - 1
    h = M // 2
    L = r * (p - 1)
    xs = np.arange(1, M, dtype=np.int64)
    bracket_ok = (_bracket_array(N * xs + h, p, r)
                  <= _bracket_array(xs, p, r) + _bracket_array(2 * xs + h, p, r))
    ks = np.arange(1, M, dtype=np.int64)
    v_ok = _criterion_sums(ks, p, N, D, r) >= L
    k_of_x = (-xs - h) % M
    keep = k_of_x != 0
    return bool(np.array_equal(bracket_ok[keep], v_ok[k_of_x[keep] - 1]))


def check_criterion(p: int, N: int, D: int, r_max: int, workers: int = 1) -> CriterionReport:
    """Exhaustively test V(Nx) + V(-Dx) + V(x) >= 1 for all levels r <= r_max.

    For (3, 23, 4) the equivalent bracket-form condition is evaluated as well
    and the two verdicts are asserted to agree pointwise.
    """
    _validate_params(p, N, D)
    report = CriterionReport(p, N, D, r_max)
    levels = list(range(1, r_max + 1))
    if workers > 1:
        import multiprocessing as mp
        with mp.Pool(workers) as pool:
            chunks = pool.starmap(_violations_at_level,
                                  [(p, N, D, r) for r in levels])
        for chunk in chunks:
            report.violations.extend(chunk)
    else:
        for r in levels:
            report.violations.extend(_violations_at_level(p, N, D, r))
    if (p, N, D) == (3, 23, 4):
        for r in levels:
            assert _bracket_form_agrees(p, N, D, r), \
                f"V-form and bracket-form verdicts disagree at level {r}"
    return report


# ---------------------------------------------------------------------------
# the digit-sum lemma and corollary specific to (3, 23, 4)
# ---------------------------------------------------------------------------

def check_lemma_bound(r_max: int) -> list:
    """Check [23x+h] <= [x] + [2x+h] + 2 for 0 <= x < 3^r, h = (3^r-1)/2,
    plus the sharp (+0) bound away from the stated exceptional digit prefixes.

    Returns a list of (r, x, kind) violations, kind in {"weak", "strong"}.
    """
    out = []
    for r in range(1, r_max + 1):
        M = 3 ** r - 1
        h = M // 2
        xs = np.arange(3 ** r, dtype=np.int64)
        lhs = _digit_sum_array(23 * xs + h, 3)
        rhs = _digit_sum_array(xs, 3) + _digit_sum_array(2 * xs + h, 3)
        weak_bad = xs[lhs > rhs + 2]
        out.extend((r, int(x), "weak") for x in weak_bad)
        if r == 1:
            exempt = xs == 1
        elif r == 2:
            exempt = xs == 3
        else:
            top3 = xs // 3 ** (r - 3)
            exempt = (top3 == 9) | (top3 == 20)  # digit prefixes 100 and 202
        strong_bad = xs[(lhs > rhs) & ~exempt]
        out.extend((r, int(x), "strong") for x in strong_bad)
    return out


def check_corollary(r_max: int) -> list:
    """Check [23x+h] <= [x] + [2x+2+h] + 2 for x not 2 or 6 mod 9, r >= 2."""
    out = []
    for r in range(2, r_max + 1):
        M = 3 ** r - 1
        h = M // 2
        xs = np.arange(3 ** r, dtype=np.int64)
        xs = xs[(xs % 9 != 2) & (xs % 9 != 6)]
        lhs = _digit_sum_array(23 * xs + h, 3)
        rhs = _digit_sum_array(xs, 3) + _digit_sum_array(2 * xs + 2 + h, 3)
        out.extend((r, int(x)) for x in xs[lhs > rhs + 2])
    return out


def duplication_check(p: int = 3, levels=range(1, 9)) -> list:
    """Verify V(x) + V(x + 1/2) = V(2x) + 1/2 exactly on whole levels."""
    if p % 2 == 0:
        raise ValueError("duplication formula needs odd p")
    out = []
    for r in levels:
        M = p ** r - 1
        h = M // 2
        L = r * (p - 1)
        ks = np.arange(M, dtype=np.int64)
        lv = L - _bracket_array(-ks, p, r)
        lv_half = L - _bracket_array(-(ks + h), p, r)
        lv_double = L - _bracket_array(-2 * ks, p, r)
        bad = ks[lv + lv_half - lv_double != L // 2]
        out.extend((r, int(k)) for k in bad)
    return out


# ---------------------------------------------------------------------------
# candidate search
# ---------------------------------------------------------------------------

@dataclass
class CandidateEntry:
    N: int
    D: int
    passed: bool
    label: str | None = None
    witness: tuple | None = None

    def to_dict(self):
        d = {"N": self.N, "D": self.D, "passed": self.passed}
        if self.label is not None:
            d["label"] = self.label
        if self.witness is not None:
            d["witness"] = {"r": self.witness[0], "k": self.witness[1]}
        return d


def _is_p_power(q: int, p: int) -> bool:
    if q < p:
        return False
    while q % p == 0:
        q //= p
    return q == 1


def classify_candidate(p: int, N: int, D: int) -> str:
    """Known-family label for a pair passing the criterion."""
    q = N + 1
    if q % D == 0 and _is_p_power((N + 1) // D, p):
        return "family-Dq-1"
    if D == 3 and _is_p_power(N - 1, p) and (N - 1) % 3 == 1:
        return "induced-D3"
    if D == 4 and ((N % 2 == 1 and _is_p_power((N - 1) // 2, p)) or _is_p_power(N - 2, p)):
        return "induced-D4"
    return "UNEXPLAINED"


def search_candidates(p: int, N_max: int, D_max: int, r_max: int) -> list:
    """Scan admissible (N, D), keep criterion-passers with family labels.

    Failing pairs are returned too, carrying their first violation witness.
    """
    results = []
    for D in range(2, D_max + 1):
        for N in range(D + 1, N_max + 1):
            if gcd(N, D) != 1 or (N * D) % p == 0:
                continue
            witness = None
            for r in range(1, r_max + 1):
                v = _violations_at_level(p, N, D, r)
                if v:
                    witness = v[0]
                    break
            if witness is None:
                results.append(CandidateEntry(N, D, True, classify_candidate(p, N, D)))
            else:
                results.append(CandidateEntry(N, D, False, witness=witness))
    return results
