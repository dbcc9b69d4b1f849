"""Conjugacy-class surveys of matrix/permutation groups.

Classes are identified by the profile (element order, character values on
all power divisors, cycle type of the permutation action); this resolves
rational classes (classes fused by algebraic conjugacy share a profile and
are reported once, with their joint size).

Sizes come from centralizer orders |C| obtained by hashing random
conjugates (collisions yield centralizing elements; a stabilizer chain
gives |<found>|), cross-checked against sampled class frequencies, and
finally certified exactly: the sizes must sum to |G| and the fused-class
multiplicities to the group's published class count.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from math import gcd

import numpy as np

from permtools import StabilizerChain, compose, identity, inverse


def divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def cycle_lengths(perm):
    """Per-point cycle length, plus the element order."""
    n = len(perm)
    length = np.zeros(n, dtype=np.int64)
    idx = np.arange(n)
    cur = perm
    k = 1
    order = 1
    while True:
        newly = (cur == idx) & (length == 0)
        if newly.any():
            length[newly] = k
            order = order * k // gcd(order, k)
        if length.all():
            break
        cur = perm[cur]
        k += 1
        if k > 10 ** 6:
            raise RuntimeError("runaway cycle search")
    return length, int(order)


def perm_power_small(perm, d):
    out = identity(len(perm))
    base = perm
    while d:
        if d & 1:
            out = compose(out, base)
        base = compose(base, base)
        d >>= 1
    return out


def digest(perm):
    return hashlib.blake2b(perm.tobytes(), digest_size=12).digest()


@dataclass
class ClassInfo:
    profile: tuple
    group_order: int
    rep_perm: np.ndarray
    rep_mat: np.ndarray | None
    cent_order: int | None = None      # |C(g)| of one fine class (lower bound until certified)
    cent_is_bound: bool = True
    freq_hits: int = 0
    multiplicity: int | None = None    # number of fused fine classes sharing the profile
    power_maps: dict = field(default_factory=dict)
    name: str = ""

    @property
    def order(self):
        return self.profile[0]

    @property
    def chi(self):
        return self.profile[1][0]

    @property
    def size(self):
        if self.cent_order is None or self.multiplicity is None:
            return None
        return self.multiplicity * (self.group_order // self.cent_order)


class GroupSurvey:
    """perm_gens/mat_gens must be aligned lists realizing the same elements."""

    def __init__(self, perm_gens, group_order, chi_of, seed=0, mat_gens=None,
                 mat_compose=None):
        self.gens = [np.asarray(g, dtype=np.int32) for g in perm_gens]
        self.n = len(self.gens[0])
        self.group_order = group_order
        self.chi_of = chi_of            # chi_of(mat) -> int, or chi_of(lengths, d) -> int
        self.mat_gens = mat_gens
        self.mat_compose = mat_compose
        self.rng = np.random.default_rng(seed)
        self.classes: dict[tuple, ClassInfo] = {}
        self._pool = None
        self.freq_samples = 0

    # -- random elements -----------------------------------------------------

    def _pr_pool(self):
        if self._pool is None:
            pool = [g.copy() for g in self.gens]
            mats = None if self.mat_gens is None else [m.copy() for m in self.mat_gens]
            while len(pool) < 12:
                k = len(pool) % len(self.gens)
                pool.append(pool[k].copy())
                if mats is not None:
                    mats.append(mats[k].copy())
            self._pool = (pool, mats)
            for _ in range(150):
                self._pr_step()
        return self._pool

    def _pr_step(self):
        pool, mats = self._pool
        m = len(pool)
        i = int(self.rng.integers(0, m))
        j = int(self.rng.integers(0, m))
        while j == i:
            j = int(self.rng.integers(0, m))
        if self.rng.integers(0, 2):
            pool[i] = compose(pool[i], pool[j])
            if mats is not None:
                mats[i] = self.mat_compose(mats[i], mats[j])
        else:
            pool[i] = compose(pool[j], pool[i])
            if mats is not None:
                mats[i] = self.mat_compose(mats[j], mats[i])
        return i

    def random_element(self):
        self._pr_pool()
        i = self._pr_step()
        pool, mats = self._pool
        return pool[i], (None if mats is None else mats[i])

    # -- profiles --------------------------------------------------------------

    def _chis_of(self, perm, mat, length, order):
        chis = []
        if mat is None:
            for d in divisors(order):
                chis.append(self.chi_of(length, d))
        else:
            cache = {1: mat}

            def mpow(d):
                if d not in cache:
                    if d % 2 == 0 and d // 2 in cache:
                        cache[d] = self.mat_compose(cache[d // 2], cache[d // 2])
                    else:
                        cache[d] = self.mat_compose(mpow(d - 1), mat)
                return cache[d]

            for d in divisors(order):
                chis.append(self.chi_of(mpow(d)))
        return tuple(chis)

    def profile_of(self, perm, mat):
        length, order = cycle_lengths(perm)
        ctype = tuple(sorted((int(v), int(c) // int(v)) for v, c in
                             zip(*np.unique(length, return_counts=True))))
        return (order, self._chis_of(perm, mat, length, order), ctype)

    # -- discovery ---------------------------------------------------------------

    def _register(self, perm, mat):
        prof = self.profile_of(perm, mat)
        if prof in self.classes:
            return False
        self.classes[prof] = ClassInfo(prof, self.group_order, perm.copy(),
                                       None if mat is None else mat.copy())
        for d in divisors(prof[0])[1:-1] if prof[0] > 1 else []:
            pd = perm_power_small(perm, d)
            md = None
            if mat is not None:
                md = mat
                for _ in range(d - 1):
                    md = self.mat_compose(md, mat)
            self._register(pd, md)
        return True

    def discover(self, min_samples=8000, patience=2500, log=print):
        ident_mat = None if self.mat_gens is None else np.eye(24, dtype=np.int64) * 8
        self._register(identity(self.n), ident_mat)
        for gi, g in enumerate(self.gens):
            self._register(g, None if self.mat_gens is None else self.mat_gens[gi])
        stale = 0
        total = 0
        while total < min_samples or stale < patience:
            perm, mat = self.random_element()
            total += 1
            if self._register(perm, mat):
                stale = 0
            else:
                stale += 1
        log(f"  discovery: {len(self.classes)} profiles after {total} samples")

    # -- frequencies ----------------------------------------------------------------

    def estimate_frequencies(self, samples, log=print):
        cheap_index = {}
        for prof in self.classes:
            cheap = (prof[0], prof[1][0], prof[2])
            cheap_index.setdefault(cheap, []).append(prof)
        for _ in range(samples):
            perm, mat = self.random_element()
            length, order = cycle_lengths(perm)
            ctype = tuple(sorted((int(v), int(c) // int(v)) for v, c in
                                 zip(*np.unique(length, return_counts=True))))
            chi1 = self.chi_of(length, 1) if mat is None else self.chi_of(mat)
            cands = cheap_index.get((order, chi1, ctype), [])
            if len(cands) == 1:
                prof = cands[0]
            else:
                prof = (order, self._chis_of(perm, mat, length, order), ctype)
                if prof not in self.classes:
                    self.classes[prof] = ClassInfo(prof, self.group_order, perm.copy(),
                                                   None if mat is None else mat.copy())
                    cheap_index.setdefault((order, chi1, ctype), []).append(prof)
            self.classes[prof].freq_hits += 1
            self.freq_samples += 1
        log(f"  frequencies: {self.freq_samples} samples")

    # -- centralizers ------------------------------------------------------------------

    def _word_pool(self, size=2048):
        if not hasattr(self, "_wpool"):
            pool = []
            for _ in range(size):
                perm, _ = self.random_element()
                pool.append(perm.astype(np.int32))
            self._wpool = pool
        return self._wpool

    def centralizer_order(self, info: ClassInfo, budget=60000, stable_target=10):
        """|<g, random centralizing elements>| via conjugate collisions.

        Words are triple products from the pool, so word-level repeats are
        negligible; identity collisions (same word value twice) carry no
        information and are skipped.
        """
        g = info.rep_perm
        if info.order == 1:
            return self.group_order, stable_target
        pool = self._word_pool()
        seen = {}
        found = []
        chain = StabilizerChain([g], self.n, seed=7, confidence=20)
        stable = 0
        tries = 0
        collisions = 0

        def word(ijk):
            i, j, k = ijk
            return compose(pool[i], compose(pool[j], pool[k]))

        while tries < budget and stable < stable_target:
            tries += 1
            ijk = tuple(int(x) for x in self.rng.integers(0, len(pool), size=3))
            h = word(ijk)
            c = compose(inverse(h), compose(g, h))
            key = digest(c)
            if key not in seen:
                seen[key] = ijk
                continue
            if seen[key] == ijk:
                continue
            h2 = word(seen[key])
            u = compose(h, inverse(h2))
            if np.array_equal(u, np.arange(self.n, dtype=u.dtype)):
                continue
            collisions += 1
            if not np.array_equal(compose(inverse(u), compose(g, u)), g):
                u = compose(inverse(h2), h)
            if np.array_equal(compose(inverse(u), compose(g, u)), g):
                if chain.contains(u):
                    stable += 1
                else:
                    found.append(u)
                    chain = StabilizerChain([g] + found, self.n, seed=7, confidence=25)
                    stable = 0
        return chain.order(), collisions
