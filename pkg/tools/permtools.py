"""Permutation-group utilities for the character-table generation scripts.

Permutations are numpy int32 arrays mapping position i to perm[i].
Composition convention: (a * b)[i] = a[b[i]], i.e. apply b first.

The stabilizer chain is the Monte-Carlo Schreier-Sims: random words are
sifted until many consecutive successes.  Every use in the generation
scripts is backed by an exact certificate (published group order, or the
class-equation sum), so a pessimistic chain is detected, never trusted.
"""

from __future__ import annotations

import numpy as np


def compose(a, b):
    return a[b]


def inverse(a):
    out = np.empty_like(a)
    out[a] = np.arange(len(a), dtype=a.dtype)
    return out


def identity(n):
    return np.arange(n, dtype=np.int32)


def is_identity(a):
    return bool(np.array_equal(a, np.arange(len(a), dtype=a.dtype)))


def perm_order(a):
    n = len(a)
    seen = np.zeros(n, dtype=bool)
    order = 1
    for i in range(n):
        if not seen[i]:
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = int(a[j])
                ln += 1
            order = order * ln // np.gcd(order, ln)
    return int(order)


def cycle_type(a):
    n = len(a)
    seen = np.zeros(n, dtype=bool)
    lens = []
    for i in range(n):
        if not seen[i]:
            ln = 0
            j = i
            while not seen[j]:
                seen[j] = True
                j = int(a[j])
                ln += 1
            lens.append(ln)
    return tuple(sorted(lens))


def perm_power(a, k):
    n = len(a)
    if k == 0:
        return identity(n)
    if k < 0:
        a, k = inverse(a), -k
    result = None
    base = a
    while k:
        if k & 1:
            result = base.copy() if result is None else compose(result, base)
        base = compose(base, base)
        k >>= 1
    return result


class _Level:
    __slots__ = ("base_pt", "gens", "tree")

    def __init__(self, base_pt):
        self.base_pt = base_pt
        self.gens = []                 # strong generators first moving this base point
        self.tree = {base_pt: None}    # point -> (parent_point, generator_ref)


class StabilizerChain:
    """Monte-Carlo Schreier-Sims with Schreier-vector transversals."""

    def __init__(self, gens, n, seed=0, confidence=40):
        self.n = n
        self.levels = []
        gens = [np.asarray(g, dtype=np.int32) for g in gens]
        gens = [g for g in gens if not is_identity(g)]
        if not gens:
            return
        for g in gens:
            self._insert(g.copy())
        rng = np.random.default_rng(seed)
        pool = [g.copy() for g in gens]
        while len(pool) < 10:
            pool.append(pool[len(pool) % len(gens)].copy())
        successes = 0
        while successes < confidence:
            i = int(rng.integers(0, len(pool)))
            j = int(rng.integers(0, len(pool)))
            if i == j:
                continue
            pool[i] = compose(pool[i], pool[j]) if rng.integers(0, 2) else compose(pool[j], pool[i])
            residue = self._sift(pool[i].copy())
            if residue is None:
                successes += 1
            else:
                successes = 0
                self._insert(residue)

    def _gens_from(self, idx):
        return [g for lvl in self.levels[idx:] for g in lvl.gens]

    def _coset_rep(self, level, pt):
        """Transversal element mapping the base point to pt."""
        path = []
        cur = pt
        while True:
            node = level.tree[cur]
            if node is None:
                break
            parent, gen = node
            path.append(gen)
            cur = parent
        g = identity(self.n)
        for gen in reversed(path):
            g = compose(gen, g)
        return g

    def _grow_orbit(self, idx):
        level = self.levels[idx]
        gens = self._gens_from(idx)
        frontier = list(level.tree)
        while frontier:
            new = []
            for pt in frontier:
                for g in gens:
                    img = int(g[pt])
                    if img not in level.tree:
                        level.tree[img] = (pt, g)
                        new.append(img)
            frontier = new

    def _sift(self, g):
        """None if the chain recognizes g, else an unrecognized residue."""
        for level in self.levels:
            img = int(g[level.base_pt])
            if img == level.base_pt:
                continue
            if img not in level.tree:
                return g
            g = compose(inverse(self._coset_rep(level, img)), g)
        return None if is_identity(g) else g

    def _insert(self, g):
        while True:
            target = None
            for idx, level in enumerate(self.levels):
                if int(g[level.base_pt]) != level.base_pt:
                    target = idx
                    break
            if target is None:
                moved = int(np.nonzero(g != np.arange(self.n))[0][0])
                self.levels.append(_Level(moved))
                target = len(self.levels) - 1
            level = self.levels[target]
            img = int(g[level.base_pt])
            if img in level.tree:
                g = compose(inverse(self._coset_rep(level, img)), g)
                if is_identity(g):
                    return
                continue
            level.gens.append(g)
            # the new generator fixes every earlier base point, so orbits at
            # this and all earlier levels may grow
            for idx in range(target + 1):
                self._grow_orbit(idx)
            return

    def order(self) -> int:
        total = 1
        for level in self.levels:
            total *= len(level.tree)
        return total

    def contains(self, g) -> bool:
        return self._sift(np.asarray(g, dtype=np.int32).copy()) is None


def group_order(gens, n, seed=0, confidence=40) -> int:
    gens = list(gens)
    if not gens:
        return 1
    return StabilizerChain(gens, n, seed=seed, confidence=confidence).order()


class RandomElements:
    """Product-replacement random walk over a generating set (seeded).

    aux: optional (objects, compose_fn) composed in parallel with the
    permutations, e.g. exact matrices realizing the same elements.
    """

    def __init__(self, gens, seed=0, pool_size=12, burn_in=80, aux=None):
        self.pool = [np.asarray(g, dtype=np.int32).copy() for g in gens]
        self.aux_objs = None
        if aux is not None:
            objs, fn = aux
            self.aux_objs = [o.copy() for o in objs]
            self.aux_fn = fn
        while len(self.pool) < pool_size:
            k = len(self.pool) % len(gens)
            self.pool.append(self.pool[k].copy())
            if self.aux_objs is not None:
                self.aux_objs.append(self.aux_objs[k].copy())
        self.rng = np.random.default_rng(seed)
        for _ in range(burn_in):
            self._step()

    def _step(self):
        m = len(self.pool)
        i = int(self.rng.integers(0, m))
        j = int(self.rng.integers(0, m))
        while j == i:
            j = int(self.rng.integers(0, m))
        if self.rng.integers(0, 2):
            self.pool[i] = compose(self.pool[i], self.pool[j])
            if self.aux_objs is not None:
                self.aux_objs[i] = self.aux_fn(self.aux_objs[i], self.aux_objs[j])
        else:
            self.pool[i] = compose(self.pool[j], self.pool[i])
            if self.aux_objs is not None:
                self.aux_objs[i] = self.aux_fn(self.aux_objs[j], self.aux_objs[i])
        return i

    def next(self):
        i = self._step()
        if self.aux_objs is not None:
            return self.pool[i], self.aux_objs[i]
        return self.pool[i]
