"""Slow but independent reference implementations used by the property tests.

Nothing here imports the engines' internals: the toric oracle is a Cech
complex on the affine cover by maximal cones, the Littlewood-Richardson oracle
counts skew tableaux with lattice reading words, and the exact complexes are
built from explicit ranks.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import numpy as np


def rank_q(rows):
    """Rank over Q by Gaussian elimination on Fractions."""
    m = [[Fraction(x) for x in r] for r in rows if any(r)]
    if not m:
        return 0
    r = 0
    ncols = len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c] / m[r][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        r += 1
        if r == len(m):
            break
    return r


def _cech_for_good_set(cones, good_rays):
    """Cech cohomology of the cover restricted to a character.

    The character is a section over U_sigma iff all rays of sigma are good, and
    the same rule applies to intersections (which are the common faces).
    """
    k = len(cones)
    simplices = [[] for _ in range(k)]
    for p in range(k):
        for idx in itertools.combinations(range(k), p + 1):
            common = set(cones[idx[0]])
            for i in idx[1:]:
                common &= set(cones[i])
            if common <= good_rays:
                simplices[p].append(idx)
    dims = [len(s) for s in simplices]
    ranks = []
    for p in range(k - 1):
        pos = {s: i for i, s in enumerate(simplices[p + 1])}
        rows = []
        for s in simplices[p]:
            row = [0] * len(simplices[p + 1])
            for t, j in pos.items():
                if set(s) <= set(t):
                    missing = next(x for x in t if x not in s)
                    row[j] = (-1) ** t.index(missing)
            rows.append(row)
        ranks.append(rank_q(rows) if rows and simplices[p + 1] else 0)
    ranks.append(0)
    h = []
    for p in range(k):
        prev = ranks[p - 1] if p > 0 else 0
        h.append(dims[p] - ranks[p] - prev)
    return h


def cech_line_cohomology(rays, cones, a, box):
    """H^*(O(D)) for D = sum a_i D_i on a complete fan, by the Cech complex.

    Characters m are enumerated in the cube |m_i| <= box; the caller checks
    that the boundary of the cube contributes nothing.
    """
    dim = len(rays[0])
    R = np.array(rays, dtype=np.int64)
    A = np.array(a, dtype=np.int64)
    grid = np.array(list(itertools.product(range(-box, box + 1), repeat=dim)), dtype=np.int64)
    good = (grid @ R.T) >= -A
    masks = good.astype(np.int64) @ (1 << np.arange(len(rays), dtype=np.int64))
    on_boundary = np.abs(grid).max(axis=1) == box
    total = [0] * dim + [0]
    boundary_hits = 0
    cache = {}
    for mask, count in zip(*np.unique(masks, return_counts=True)):
        mask = int(mask)
        if mask not in cache:
            good_rays = {i for i in range(len(rays)) if mask >> i & 1}
            cache[mask] = _cech_for_good_set(cones, good_rays)
        h = cache[mask]
        if any(h):
            boundary_hits += int(np.count_nonzero(on_boundary & (masks == mask)))
        for i, x in enumerate(h[: dim + 1]):
            total[i] += x * int(count)
    return tuple(total), boundary_hits


# ---------------------------------------------------------------------------
# Littlewood-Richardson by tableau enumeration


def partitions(n, max_len=None):
    def rec(n, largest):
        if n == 0:
            yield ()
            return
        for k in range(min(n, largest), 0, -1):
            for rest in rec(n - k, k):
                yield (k,) + rest
    for p in rec(n, n):
        if max_len is None or len(p) <= max_len:
            yield p


def _contains(nu, lam):
    return len(lam) <= len(nu) and all(x <= y for x, y in zip(lam, nu))


def lr_coefficient(lam, mu, nu):
    """Number of LR tableaux of skew shape nu/lam and content mu."""
    if sum(nu) != sum(lam) + sum(mu) or not _contains(nu, lam):
        return 0
    lam = tuple(lam) + (0,) * (len(nu) - len(lam))
    cells = [(r, c) for r in range(len(nu)) for c in range(lam[r], nu[r])]
    # reading order: rows top to bottom, each row right to left
    order = sorted(cells, key=lambda rc: (rc[0], -rc[1]))
    k = len(mu)
    count = 0
    filling = {}

    def ok(cell, v):
        r, c = cell
        if (r, c + 1) in filling and filling[(r, c + 1)] < v:
            return False
        if (r - 1, c) in filling and filling[(r - 1, c)] >= v:
            return False
        return True

    def rec(i, used):
        nonlocal count
        if i == len(order):
            count += 1
            return
        cell = order[i]
        for v in range(k):
            if used[v] >= mu[v]:
                continue
            if v > 0 and used[v] + 1 > used[v - 1]:
                continue  # lattice word condition
            if not ok(cell, v):
                continue
            filling[cell] = v
            used[v] += 1
            rec(i + 1, used)
            used[v] -= 1
            del filling[cell]

    rec(0, [0] * k)
    return count


# ---------------------------------------------------------------------------
# random exact complexes


def random_exact_complex(rng: random.Random, length: int, max_rank: int = 6):
    """Dimensions d_0..d_{length-1} of an exact complex 0 -> V_0 -> ... -> 0."""
    ranks = [rng.randint(0, max_rank) for _ in range(length - 1)]
    dims = []
    for i in range(length):
        left = ranks[i - 1] if i > 0 else 0
        right = ranks[i] if i < length - 1 else 0
        dims.append(left + right)
    return dims
