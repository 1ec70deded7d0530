"""Independent brute-force persistence oracle and random complex generators.

The oracle never touches the package reduction code: it reads the raw
complex data, computes persistent ranks of every inclusion of action
windows with its own GF(2) bitmask elimination, and recovers the bar
multiset by double differences of those ranks.
"""

from __future__ import annotations

import math
import random

from floerbar.complexes import F2, F2T, FilteredComplex
from floerbar.poly2 import ONE, PolyT


# ---------------------------------------------------------------------------
# tiny GF(2) linear algebra of its own


def _rank(vectors: list[int]) -> int:
    basis: list[int] = []
    for v in vectors:
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    return len(basis)


def _nullspace(cols: list[int]) -> list[int]:
    """Combination masks x with sum_{j in x} cols[j] = 0."""
    pivots: dict[int, tuple[int, int]] = {}
    null: list[int] = []
    for j, v in enumerate(cols):
        combo = 1 << j
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                break
            pv, pc = pivots[top]
            v ^= pv
            combo ^= pc
        if v:
            pivots[v.bit_length() - 1] = (v, combo)
        else:
            null.append(combo)
    return null


# ---------------------------------------------------------------------------
# the oracle


def bruteforce_barcode(C: FilteredComplex) -> list[tuple[float, float]]:
    """Bar multiset of a strict F2 complex from persistent rank counts.

    beta(u, v) is the rank of the map H(C_{>theta_v}) -> H(C_{>theta_u})
    induced by inclusion; the number of bars with endpoint bucket u and
    start bucket w is the double difference of beta over the grid.
    """
    names = list(C.names)
    index = {n: i for i, n in enumerate(names)}
    actions = [C.action(n) for n in names]
    levels = sorted(set(actions))
    K = len(levels)

    def members(j: int) -> list[int]:
        # generators of the window C_{>theta_j}, i.e. action >= levels[j]
        if j >= K:
            return []
        return [i for i, a in enumerate(actions) if a >= levels[j]]

    def col_mask(i: int) -> int:
        mask = 0
        for y in C.differential.get(names[i], {}):
            mask |= 1 << index[y]
        return mask

    def zb(j: int) -> tuple[list[int], list[int]]:
        mem = members(j)
        cols = [col_mask(i) for i in mem]
        kernel_combos = _nullspace(cols)
        zbasis = []
        for combo in kernel_combos:
            vec = 0
            for pos, i in enumerate(mem):
                if combo >> pos & 1:
                    vec |= 1 << i
            zbasis.append(vec)
        bnd = [c for c in cols if c]
        return zbasis, bnd

    cache: dict[int, tuple[list[int], list[int]]] = {j: zb(j) for j in range(K + 1)}

    def beta(u: int, v: int) -> int:
        if u < 0:
            return 0
        zv = cache[v][0]
        bu = cache[u][1]
        return _rank(zv + bu) - _rank(bu)

    bars: list[tuple[float, float]] = []
    for w in range(1, K + 1):  # start level s = levels[w-1]
        s = levels[w - 1]
        n_inf = beta(0, w - 1) - beta(0, w)
        bars.extend((-math.inf, s) for _ in range(n_inf))
        for u in range(1, w):  # endpoint level e = levels[u-1]
            e = levels[u - 1]
            n = beta(u, w - 1) - beta(u - 1, w - 1) - beta(u, w) + beta(u - 1, w)
            bars.extend((e, s) for _ in range(n))
    return sorted(bars)


# ---------------------------------------------------------------------------
# random complexes


def random_f2_complex(rng: random.Random, n: int, name_prefix: str = "g") -> FilteredComplex:
    """Random valid strict F2 complex on n generators with distinct actions.

    Built as a conjugated standard form: a random action-respecting pairing
    gives the plain differential, then a random compatible unit-triangular
    change of basis scrambles it.  Over a field every valid complex arises
    this way.
    """
    actions = sorted(rng.uniform(-5, 5) for _ in range(n))
    while len(set(actions)) != n:
        actions = sorted(rng.uniform(-5, 5) for _ in range(n))
    names = [f"{name_prefix}{i}" for i in range(n)]
    gens = list(zip(names, actions))

    free = list(range(n))
    rng.shuffle(free)
    pairs = []
    while len(free) >= 2:
        a = free.pop()
        if not free or rng.random() < 0.3:
            continue
        b = free.pop()
        lo, hi = (a, b) if actions[a] < actions[b] else (b, a)
        pairs.append((lo, hi))
    diff = {names[lo]: {names[hi]: ONE} for lo, hi in pairs}
    C = FilteredComplex.build(F2, gens, diff, strict=True)
    M = random_compatible_change(rng, C)
    from floerbar.complexes import apply_basis_change

    return apply_basis_change(C, M)


def random_compatible_change(rng: random.Random, C: FilteredComplex,
                             ring: str = F2, density: float = 0.4) -> dict:
    """Random unit-triangular filtration-compatible basis change matrix.

    Entries send a generator into strictly higher-action ones, so both the
    matrix and its inverse preserve the filtration.
    """
    M: dict[str, dict[str, PolyT]] = {}
    names = C.names
    for x in names:
        row = {x: ONE}
        for y in names:
            if y != x and C.action(y) > C.action(x) and rng.random() < density:
                if ring == F2:
                    row[y] = ONE
                else:
                    row[y] = PolyT(rng.randrange(1, 8))
        M[x] = row
    return M
