"""Exact dense linear algebra over GF(2)[T].

Matrices are lists of PolyT rows.  Everything here runs on the small
matrices produced by desk-scale complexes (at most a few hundred
generators), so the implementation favors clarity over asymptotics.

Smith normal form drives all the solvers: for S = U @ A @ V with U, V
invertible and S diagonal, the system A x = b becomes the diagonal system
S z = U b with x = V z.
"""

from __future__ import annotations

from .poly2 import ONE, PolyT, poly_divmod

Mat = list[list[PolyT]]

_Z = PolyT(0)


def zeros(m: int, n: int) -> Mat:
    return [[_Z] * n for _ in range(m)]


def identity(n: int) -> Mat:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = ONE
    return out


def mat_mul(a: Mat, b: Mat) -> Mat:
    m, k = len(a), len(b)
    n = len(b[0]) if b else 0
    out = zeros(m, n)
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            p = ai[t]
            if not p:
                continue
            bt = b[t]
            for j in range(n):
                if bt[j]:
                    oi[j] = oi[j] + p * bt[j]
    return out


def mat_vec(a: Mat, v: list[PolyT]) -> list[PolyT]:
    out = []
    for row in a:
        acc = _Z
        for p, q in zip(row, v):
            if p and q:
                acc = acc + p * q
        out.append(acc)
    return out


def is_zero(a: Mat) -> bool:
    return all(not p for row in a for p in row)


def smith_normal_form(a: Mat) -> tuple[Mat, Mat, Mat]:
    """Return (S, U, V) with S = U @ a @ V diagonal, d_i | d_{i+1}."""
    s = [row[:] for row in a]
    m = len(s)
    n = len(s[0]) if s else 0
    u = identity(m)
    v = identity(n)

    def row_add(i, j, q):  # row_i += q * row_j
        for c in range(n):
            if s[j][c]:
                s[i][c] = s[i][c] + q * s[j][c]
        for c in range(m):
            if u[j][c]:
                u[i][c] = u[i][c] + q * u[j][c]

    def col_add(i, j, q):  # col_i += q * col_j
        for r in range(m):
            if s[r][j]:
                s[r][i] = s[r][i] + q * s[r][j]
        for r in range(n):
            if v[r][j]:
                v[r][i] = v[r][i] + q * v[r][j]

    def row_swap(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def col_swap(i, j):
        for r in range(m):
            s[r][i], s[r][j] = s[r][j], s[r][i]
        for r in range(n):
            v[r][i], v[r][j] = v[r][j], v[r][i]

    t = 0
    while t < min(m, n):
        # minimal-degree nonzero pivot in the trailing block
        best = None
        for i in range(t, m):
            for j in range(t, n):
                if s[i][j] and (best is None or s[i][j].degree < s[best[0]][best[1]].degree):
                    best = (i, j)
        if best is None:
            break
        row_swap(t, best[0])
        col_swap(t, best[1])

        while True:
            # clear column t by euclidean steps; a nonzero remainder has a
            # smaller degree and becomes the new pivot
            dirty = False
            for i in range(t + 1, m):
                if not s[i][t]:
                    continue
                q, r = poly_divmod(s[i][t], s[t][t])
                row_add(i, t, q)
                if r:
                    row_swap(t, i)
                    dirty = True
                    break
            if dirty:
                continue
            for j in range(t + 1, n):
                if not s[t][j]:
                    continue
                q, r = poly_divmod(s[t][j], s[t][t])
                col_add(j, t, q)
                if r:
                    col_swap(t, j)
                    dirty = True
                    break
            if dirty:
                continue
            # pivot must divide the rest of the block
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if s[i][j] and poly_divmod(s[i][j], s[t][t])[1]:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            row_add(t, offender, ONE)
        t += 1
    return s, u, v


def invariant_factors(a: Mat) -> list[PolyT]:
    s, _, _ = smith_normal_form(a)
    out = []
    for i in range(min(len(s), len(s[0]) if s else 0)):
        if s[i][i]:
            out.append(s[i][i])
    return out


def solve(a: Mat, b: list[PolyT]) -> list[PolyT] | None:
    """One solution of a @ x = b, or None when the system is inconsistent."""
    m = len(a)
    n = len(a[0]) if a else 0
    if len(b) != m:
        raise ValueError("dimension mismatch")
    if n == 0:
        return [] if all(not p for p in b) else None
    s, u, v = smith_normal_form(a)
    y = mat_vec(u, b)
    z: list[PolyT] = [_Z] * n
    for i in range(m):
        d = s[i][i] if i < n else _Z
        if d:
            q, r = poly_divmod(y[i], d)
            if r:
                return None
            z[i] = q
        elif y[i]:
            return None
    return mat_vec(v, z)


def kernel_basis(a: Mat) -> list[list[PolyT]]:
    """Basis of the kernel of a @ x = 0 (free, since the ring is a domain)."""
    m = len(a)
    n = len(a[0]) if a else 0
    s, _, v = smith_normal_form(a)
    out = []
    for j in range(n):
        diag = s[j][j] if j < m else _Z
        if not diag:
            out.append([v[i][j] for i in range(n)])
    return out


def invert(a: Mat) -> Mat | None:
    """Inverse over GF(2)[T], or None when the determinant is not a unit."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return []
    s, u, v = smith_normal_form(a)
    for i in range(n):
        if not s[i][i].is_unit():
            return None
    return mat_mul(v, u)


# ---------------------------------------------------------------------------
# GF(2) bitmask helpers (fast path for field complexes)


def gf2_rank(rows: list[int]) -> int:
    """Rank of a GF(2) matrix given as row bit masks."""
    basis: list[int] = []
    for row in rows:
        cur = row
        for b in basis:
            cur = min(cur, cur ^ b)
        if cur:
            basis.append(cur)
    return len(basis)


def gf2_solve(rows: list[int], rhs: list[int]) -> int | None:
    """One solution mask x of A x = rhs over GF(2), or None when inconsistent.

    Row i of A is the bit mask rows[i] (bit j = column j), rhs[i] in {0, 1}.
    Free variables are set to zero.
    """
    pivot_of: dict[int, tuple[int, int]] = {}  # leading column -> (row, b)
    for mask, b in zip(rows, rhs):
        b &= 1
        while mask:
            col = mask.bit_length() - 1
            if col not in pivot_of:
                break
            pm, pb = pivot_of[col]
            mask ^= pm
            b ^= pb
        if mask:
            pivot_of[mask.bit_length() - 1] = (mask, b)
        elif b:
            return None
    x = 0
    for col in sorted(pivot_of):
        pm, pb = pivot_of[col]
        others = pm ^ (1 << col)
        if pb ^ ((others & x).bit_count() & 1):
            x |= 1 << col
    return x
