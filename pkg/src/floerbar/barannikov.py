"""Barannikov decomposition, standardness certificates, barcodes.

The reduction processes generator columns from the highest action level
down (that is the order in which they enter the subcomplexes C_{>s});
a column may only receive columns that entered earlier, which keeps every
intermediate basis compatible.  The pivot of a column is the support
generator realizing its action.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

from . import f2t_linalg as la
from .complexes import (
    DEFAULT_TIE_TOL,
    F2,
    F2T,
    Chain,
    FilteredComplex,
    action_of,
    chain_add,
    chain_canon,
    chains_equal,
    validate,
)
from .errors import GammaUndefinedError, InputError
from .poly2 import ONE, PolyT

_Z = PolyT(0)


# ---------------------------------------------------------------------------
# bases


@dataclass(frozen=True)
class BarannikovBasis:
    """Compatible basis split into differential pairs and surviving cycles.

    Every chain is expressed over the canonical generators of ``complex``.
    """

    complex: FilteredComplex
    pairs: tuple[tuple[Chain, Chain], ...]
    cycles: tuple[Chain, ...]

    def all_chains(self) -> list[Chain]:
        out = []
        for a, b in self.pairs:
            out.append(a)
            out.append(b)
        out.extend(self.cycles)
        return out

    def verify(self, tie_tol: float = DEFAULT_TIE_TOL) -> list[str]:
        """Re-check every defining property; empty list means the basis holds."""
        C = self.complex
        problems: list[str] = []
        chains = self.all_chains()
        names = C.names
        n = len(names)

        if len(chains) != n:
            problems.append(f"basis has {len(chains)} chains for {n} generators")
            return problems
        for k, ch in enumerate(chains):
            if not chain_canon(ch):
                problems.append(f"chain #{k} is zero")
                return problems
            for g, p in ch.items():
                if g not in C._index:
                    problems.append(f"chain #{k} uses unknown generator {g!r}")
                    return problems
                if C.ring == F2 and p.degree > 0:
                    problems.append(f"chain #{k} has a positive-degree coefficient in an F2 complex")

        for i, (a, b) in enumerate(self.pairs):
            if not chains_equal(C.boundary(a), b):
                problems.append(f"pair #{i}: d(a) != b")
        for j, z in enumerate(self.cycles):
            if chain_canon(C.boundary(z)):
                problems.append(f"cycle #{j} is not closed")

        rows = [[ch.get(g, _Z) for g in names] for ch in chains]
        if not _invertible(rows):
            problems.append("chains do not form a basis over the ring")
            return problems

        # compatibility: at every level the high-action chains must span the
        # high-action subcomplex
        actions = [action_of(C, ch) for ch in chains]
        for level in C.action_levels():
            hi_chains = [i for i, a in enumerate(actions) if a >= level]
            hi_gens = [j for j, g in enumerate(C.generators) if g.action >= level]
            if len(hi_chains) != len(hi_gens):
                problems.append(
                    f"level {level!r}: {len(hi_chains)} chains against {len(hi_gens)} generators")
                continue
            sub = [[rows[i][j] for j in hi_gens] for i in hi_chains]
            if not _invertible(sub):
                problems.append(f"level {level!r}: chains do not span the subcomplex")

        # the b-chains must span the boundaries
        bmat = [[b.get(g, _Z) for g in names] for _, b in self.pairs]
        for x in names:
            dx = C.row(x)
            if not dx:
                continue
            target = [dx.get(g, _Z) for g in names]
            cols = [[bmat[i][j] for i in range(len(bmat))] for j in range(n)]
            if la.solve(cols, target) is None:
                problems.append(f"d({x!r}) is not spanned by the boundary chains")
        return problems

    def rename(self, mapping: Mapping[str, str], new_complex: FilteredComplex) -> "BarannikovBasis":
        def rn(ch: Chain) -> Chain:
            return {mapping.get(g, g): p for g, p in ch.items()}

        return BarannikovBasis(
            new_complex,
            tuple((rn(a), rn(b)) for a, b in self.pairs),
            tuple(rn(z) for z in self.cycles),
        )

    def with_complex(self, C: FilteredComplex) -> "BarannikovBasis":
        return BarannikovBasis(C, self.pairs, self.cycles)


def _invertible(rows: list[list[PolyT]]) -> bool:
    if not rows:
        return True
    if all(p.degree <= 0 for row in rows for p in row):
        masks = [sum((1 << j) for j, p in enumerate(row) if p) for row in rows]
        return la.gf2_rank(masks) == len(rows)
    return la.invert([row[:] for row in rows]) is not None


# ---------------------------------------------------------------------------
# reduction over the field


def barannikov_reduce(C: FilteredComplex) -> BarannikovBasis:
    """Barannikov basis of a valid F2 complex.

    Columns are processed from the highest action level down; reducing a
    column only ever adds chains of larger or equal action, so every
    intermediate basis stays compatible.  The output is deterministic.
    """
    if C.ring != F2:
        raise InputError("barannikov_reduce expects an F2 complex")
    report = validate(C)
    if not report.ok:
        raise InputError(f"cannot reduce an invalid complex: {report}")

    pos = C.entry_position

    def pivot(chain: Chain) -> str:
        return max(chain, key=pos.__getitem__)

    owner: dict[str, str] = {}
    basis: dict[str, Chain] = {}
    reduced: dict[str, Chain] = {}
    for g in C.entry_order:
        b: Chain = {g: ONE}
        r = C.row(g)
        while r:
            holder = owner.get(pivot(r))
            if holder is None:
                break
            r = chain_add(r, reduced[holder])
            b = chain_add(b, basis[holder])
        basis[g] = b
        reduced[g] = r
        if r:
            owner[pivot(r)] = g

    pairs = [(basis[g], reduced[g]) for g in C.entry_order if reduced[g]]
    cycles = [basis[g] for g in C.entry_order if not reduced[g] and g not in owner]
    assert 2 * len(pairs) + len(cycles) == len(C)

    pairs.sort(key=lambda ab: (action_of(C, ab[0]), pos[pivot(ab[0])]))
    cycles.sort(key=lambda z: (action_of(C, z), pos[pivot(z)]))
    return BarannikovBasis(C, tuple(pairs), tuple(cycles))


# ---------------------------------------------------------------------------
# barcodes


@dataclass(frozen=True)
class Bar:
    """Half-open interval (end, start] with end <= start."""

    end: float
    start: float

    @property
    def semi_infinite(self) -> bool:
        return self.end == -math.inf

    @property
    def length(self) -> float:
        return self.start - self.end


@dataclass(frozen=True)
class Barcode:
    bars: tuple[Bar, ...]

    @classmethod
    def of(cls, bars) -> "Barcode":
        return cls(tuple(sorted(bars, key=lambda b: (-b.start, -b.end))))

    def semi_infinite(self) -> list[Bar]:
        return [b for b in self.bars if b.semi_infinite]

    def finite(self) -> list[Bar]:
        return [b for b in self.bars if not b.semi_infinite]

    def __len__(self) -> int:
        return len(self.bars)

    def __iter__(self):
        return iter(self.bars)


def barcode_of(basis: BarannikovBasis) -> Barcode:
    """Barcode read off a Barannikov basis; the basis is re-verified first."""
    problems = basis.verify()
    if problems:
        raise InputError("stale Barannikov basis: " + "; ".join(problems))
    return _barcode_unchecked(basis)


def _barcode_unchecked(basis: BarannikovBasis) -> Barcode:
    C = basis.complex
    bars = [Bar(action_of(C, a), action_of(C, b)) for a, b in basis.pairs]
    bars += [Bar(-math.inf, action_of(C, z)) for z in basis.cycles]
    return Barcode.of(bars)


def spectral_invariants_defined(B: Barcode) -> bool:
    return bool(B.semi_infinite())


@dataclass(frozen=True)
class SpectralInvariants:
    gamma: float
    boundary_depth: float


def boundary_depth(B: Barcode) -> float:
    """Largest finite bar length, 0 when there is none."""
    finite = B.finite()
    return max((b.length for b in finite), default=0.0)


def spectral_invariants(B: Barcode) -> SpectralInvariants:
    """Spectral norm and boundary depth of a barcode.

    gamma is the largest difference between the levels of two semi-infinite
    bars (0 when there is exactly one); it is undefined without them.
    """
    starts = [b.start for b in B.semi_infinite()]
    if not starts:
        raise GammaUndefinedError("barcode has no semi-infinite bars")
    return SpectralInvariants(max(starts) - min(starts), boundary_depth(B))


# ---------------------------------------------------------------------------
# bottleneck matching


def bottleneck_distance(B1: Barcode, B2: Barcode) -> float:
    """Bottleneck matching cost between two barcodes.

    Semi-infinite bars match only semi-infinite bars (count mismatch gives
    +inf); finite bars may instead match the diagonal at half their length.
    """
    s1 = sorted(b.start for b in B1.semi_infinite())
    s2 = sorted(b.start for b in B2.semi_infinite())
    if len(s1) != len(s2):
        return math.inf
    d_inf = max((abs(a - b) for a, b in zip(s1, s2)), default=0.0)

    f1 = B1.finite()
    f2 = B2.finite()
    if not f1 and not f2:
        return d_inf

    def pair_cost(u: Bar, v: Bar) -> float:
        return max(abs(u.end - v.end), abs(u.start - v.start))

    halves1 = [b.length / 2 for b in f1]
    halves2 = [b.length / 2 for b in f2]
    candidates = {0.0, *halves1, *halves2}
    for u in f1:
        for v in f2:
            candidates.add(pair_cost(u, v))
    ordered = sorted(candidates)

    def feasible(r: float) -> bool:
        edges = {i: [j for j, v in enumerate(f2) if pair_cost(f1[i], v) <= r]
                 for i in range(len(f1))}
        drop1 = [h <= r for h in halves1]
        drop2 = [h <= r for h in halves2]
        return _joint_feasible(len(f1), len(f2), edges, drop1, drop2)

    lo, hi = 0, len(ordered) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(ordered[mid]):
            hi = mid
        else:
            lo = mid + 1
    return max(d_inf, ordered[lo])


def _joint_feasible(n1: int, n2: int, edges, drop1, drop2) -> bool:
    """Perfect matching test with per-bar diagonal ghosts.

    Left nodes: the n1 bars plus one ghost per right bar; right nodes: the n2
    bars plus one ghost per left bar.  Bar i may take its own right ghost when
    droppable, ghost-ghost pairs are free.
    """
    adj: dict[int, list[int]] = {}
    for i in range(n1):
        adj[i] = list(edges[i]) + ([n2 + i] if drop1[i] else [])
    for k in range(n2):
        adj[n1 + k] = ([k] if drop2[k] else []) + list(range(n2, n2 + n1))
    return _max_matching(n1 + n2, adj) == n1 + n2


def _max_matching(n_left: int, adj: dict[int, list[int]]) -> int:
    """Size of a maximum bipartite matching (augmenting paths)."""
    match_r: dict[int, int] = {}

    def try_assign(u, seen):
        for v in adj.get(u, ()):
            if v in seen:
                continue
            seen.add(v)
            if v not in match_r or try_assign(match_r[v], seen):
                match_r[v] = u
                return True
        return False

    matched = 0
    for u in range(n_left):
        if try_assign(u, set()):
            matched += 1
    return matched


def barcodes_match(B1: Barcode, B2: Barcode, tol: float) -> bool:
    """Multiset equality of bars up to tol on endpoints (no diagonal drops)."""
    s1 = sorted(b.start for b in B1.semi_infinite())
    s2 = sorted(b.start for b in B2.semi_infinite())
    if len(s1) != len(s2) or any(abs(a - b) > tol for a, b in zip(s1, s2)):
        return False
    f1, f2 = B1.finite(), B2.finite()
    if len(f1) != len(f2):
        return False
    edges = {i: [j for j, v in enumerate(f2)
                 if abs(f1[i].end - v.end) <= tol and abs(f1[i].start - v.start) <= tol]
             for i in range(len(f1))}
    return _max_matching(len(f1), edges) == len(f1)


# ---------------------------------------------------------------------------
# quotient and standardness over GF(2)[T]


def quotient_mod_T(C: FilteredComplex) -> FilteredComplex:
    """The field complex C / T.C with the induced (sup over lifts) action.

    On the canonical compatible basis the sup over lifts is just the
    generator's action, and the induced differential keeps the constant
    terms.
    """
    if C.ring != F2T:
        raise InputError("quotient_mod_T expects an F2T complex")
    diff = {x: {y: ONE for y, p in row.items() if p.mask & 1}
            for x, row in C.differential.items()}
    diff = {x: row for x, row in diff.items() if row}
    return FilteredComplex(F2, C.generators, diff, C.strict)


@dataclass(frozen=True)
class TorsionCertificate:
    """A cycle whose multiple bounds although the cycle itself does not.

    The certificate lives in the subcomplex spanned by the generators of
    action >= ``window``; ``multiplier`` is the non-unit annihilator (T^k in
    the pure T-torsion case).
    """

    window: float
    cycle: Chain
    multiplier: PolyT

    def reverify(self, C: FilteredComplex) -> list[str]:
        problems = []
        if self.multiplier.is_unit() or self.multiplier.is_zero():
            problems.append("multiplier is not a non-unit")
        names = [g.name for g in C.generators if g.action >= self.window]
        if any(g not in names for g in self.cycle):
            problems.append("cycle leaves the stated action window")
            return problems
        cols = _boundary_columns(C, names)
        vec = [self.cycle.get(g, _Z) for g in names]
        if chain_canon(C.boundary(self.cycle)):
            problems.append("certificate chain is not a cycle")
        scaled = [self.multiplier * p for p in vec]
        if la.solve(cols, scaled) is None:
            problems.append("multiplier * cycle is not a boundary in the window")
        if la.solve(cols, vec) is not None:
            problems.append("cycle itself is already a boundary in the window")
        return problems


@dataclass(frozen=True)
class StandardnessVerdict:
    status: str  # "standard" | "not_standard" | "undetermined"
    witness: BarannikovBasis | None = None
    certificate: TorsionCertificate | None = None
    detail: str = ""

    @property
    def is_standard(self) -> bool:
        return self.status == "standard"


def _boundary_columns(C: FilteredComplex, names: list[str]) -> la.Mat:
    """Matrix whose column j holds d(names[j]) restricted to names (column convention)."""
    index = {g: i for i, g in enumerate(names)}
    n = len(names)
    cols = la.zeros(n, n)
    for j, x in enumerate(names):
        for y, p in C.differential.get(x, {}).items():
            i = index.get(y)
            if i is not None:
                cols[i][j] = p
    return cols


def _torsion_scan(C: FilteredComplex) -> TorsionCertificate | None:
    """Search every action window for non-free homology over GF(2)[T]."""
    for level in C.action_levels():
        names = [g.name for g in C.generators if g.action >= level]
        if not names:
            continue
        D = _boundary_columns(C, names)
        kernel = la.kernel_basis(D)
        if not kernel:
            continue
        km = [[kernel[k][i] for k in range(len(kernel))] for i in range(len(names))]
        qcols: list[list[PolyT]] = []
        for j in range(len(names)):
            col = [D[i][j] for i in range(len(names))]
            if all(not p for p in col):
                continue
            y = la.solve(km, col)
            if y is None:  # cannot happen for a valid complex
                raise InputError("boundary outside the cycle module; complex is invalid")
            qcols.append(y)
        if not qcols:
            continue
        q = [[qcols[j][i] for j in range(len(qcols))] for i in range(len(kernel))]
        s, u, _v = la.smith_normal_form(q)
        for i in range(min(len(s), len(s[0]) if s else 0)):
            d = s[i][i]
            if d and not d.is_unit():
                uinv = la.invert(u)
                assert uinv is not None
                zk = [uinv[r][i] for r in range(len(kernel))]
                chain: Chain = {}
                for k, coeff in enumerate(zk):
                    if coeff:
                        for r, name in enumerate(names):
                            if kernel[k][r]:
                                chain = chain_add(chain, {name: coeff * kernel[k][r]})
                cert = TorsionCertificate(level, chain_canon(chain), d)
                problems = cert.reverify(C)
                if problems:
                    raise AssertionError(
                        "internal: torsion certificate failed re-verification: "
                        + "; ".join(problems))
                return cert
    return None


def _poly_div_T(p: PolyT) -> PolyT:
    assert p.mask & 1 == 0
    return PolyT(p.mask >> 1)


def _lift_correction(C: FilteredComplex, base: Chain, pinned: list[str],
                     residual: Chain, lead: str) -> Chain | None:
    """Find Y with support above the base level, away from the lead generator,
    such that the pinned rows of d(base + T*Y) vanish against ``residual``.

    ``residual`` holds the pinned rows of d(base), all divisible by T.
    """
    level = action_of(C, base)
    allowed = [g.name for g in C.generators
               if g.action >= level and g.name != lead]
    rows = pinned
    mat = [[C.entry(x, y) for x in allowed] for y in rows]
    rhs = [_poly_div_T(residual.get(y, _Z)) for y in rows]
    sol = la.solve(mat, rhs)
    if sol is None:
        return None
    return chain_canon({g: p for g, p in zip(allowed, sol)})


def standardness_test(C: FilteredComplex,
                      tie_tol: float = DEFAULT_TIE_TOL) -> StandardnessVerdict:
    """Decide whether C is isomorphic, action-preservingly, to a field
    complex tensored up to GF(2)[T].

    Torsion in the homology of any action window refutes standardness with a
    certificate.  Otherwise the Barannikov basis of C/T.C is lifted through
    the triangular systems d(lift a) = lift b and d(lift z) = 0 with
    corrections divisible by T; a verified lift is the witness.  When the
    lift fails the result is honestly undetermined: freedom of the window
    homologies is necessary but not known to be sufficient.
    """
    if C.ring != F2T:
        raise InputError("standardness_test expects an F2T complex")
    report = validate(C, tie_tol)
    if not report.ok:
        raise InputError(f"cannot test an invalid complex: {report}")

    cert = _torsion_scan(C)
    if cert is not None:
        return StandardnessVerdict("not_standard", certificate=cert,
                                   detail=f"torsion with annihilator {cert.multiplier} "
                                          f"in the window action >= {cert.window!r}")

    field = quotient_mod_T(C)
    fb = barannikov_reduce(field)
    pos = C.entry_position

    def lead_of(ch: Chain) -> str:
        return max(ch, key=pos.__getitem__)

    pairs = []
    for a_f, b_f in fb.pairs:
        a = dict(a_f)
        b = C.boundary(a)
        pivot = lead_of(b_f)
        level = action_of(C, b_f)
        pinned = [g.name for g in C.generators if g.action < level] + [pivot]
        residual = {y: b.get(y, _Z) for y in pinned}
        residual[pivot] = residual.get(pivot, _Z) + ONE
        residual = chain_canon(residual)
        if residual:
            corr = _lift_correction(C, a, pinned, residual, lead_of(a_f))
            if corr is None:
                return StandardnessVerdict(
                    "undetermined",
                    detail=f"no filtration-compatible lift for the pair at level {level!r}")
            a = chain_add(a, {g: PolyT(p.mask << 1) for g, p in corr.items()})
            b = C.boundary(a)
        pairs.append((a, b))

    cycles = []
    for z_f in fb.cycles:
        z = dict(z_f)
        bz = C.boundary(z)
        if bz:
            pinned = list(C.names)
            corr = _lift_correction(C, z, pinned, bz, lead_of(z_f))
            if corr is None:
                return StandardnessVerdict(
                    "undetermined",
                    detail=f"no filtration-compatible closing correction for the cycle "
                           f"at level {action_of(C, z_f)!r}")
            z = chain_add(z, {g: PolyT(p.mask << 1) for g, p in corr.items()})
            if chain_canon(C.boundary(z)):
                return StandardnessVerdict("undetermined",
                                           detail="cycle correction failed to close")
        cycles.append(z)

    witness = BarannikovBasis(C, tuple(pairs), tuple(cycles))
    problems = witness.verify(tie_tol)
    if problems:
        return StandardnessVerdict("undetermined",
                                   detail="lift verification failed: " + "; ".join(problems))
    return StandardnessVerdict("standard", witness=witness)


def barcode_standard(C: FilteredComplex, witness: BarannikovBasis) -> Barcode:
    """Barcode of a standard F2T complex read off a verified witness basis."""
    if witness.complex is not C and witness.complex != C:
        raise InputError("witness belongs to a different complex")
    problems = witness.verify()
    if problems:
        raise InputError("witness fails verification: " + "; ".join(problems))
    return _barcode_unchecked(witness)


# ---------------------------------------------------------------------------
# CSV / SVG emission


def _fmt(x: float) -> str:
    if x == -math.inf:
        return "-inf"
    return format(x, ".9g")


def barcode_to_csv(B: Barcode) -> str:
    lines = ["end,start"]
    for bar in sorted(B.bars, key=lambda b: (-b.start, -b.end)):
        lines.append(f"{_fmt(bar.end)},{_fmt(bar.start)}")
    return "\n".join(lines) + "\n"


def barcode_to_svg(B: Barcode, width: int = 480, row_h: int = 16) -> str:
    bars = sorted(B.bars, key=lambda b: (-b.start, -b.end))
    finite_pts = [b.start for b in bars] + [b.end for b in bars if not b.semi_infinite]
    lo = min(finite_pts, default=0.0)
    hi = max(finite_pts, default=1.0)
    if hi <= lo:
        hi = lo + 1.0
    pad = 0.08 * (hi - lo)
    lo -= pad
    hi += pad

    def sx(v: float) -> float:
        return 40 + (v - lo) / (hi - lo) * (width - 60)

    height = row_h * (len(bars) + 2)
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">']
    axis_y = height - row_h
    out.append(f'<line x1="40" y1="{axis_y}" x2="{width - 20}" y2="{axis_y}" stroke="black"/>')
    for i, bar in enumerate(bars):
        y = row_h * (i + 1)
        x0 = 24.0 if bar.semi_infinite else sx(bar.end)
        x1 = sx(bar.start)
        dash = ' stroke-dasharray="4 2"' if bar.semi_infinite else ""
        out.append(f'<line x1="{x0:.2f}" y1="{y}" x2="{x1:.2f}" y2="{y}" '
                   f'stroke="steelblue" stroke-width="6"{dash}/>')
    out.append(f'<text x="40" y="{height - 2}" font-size="10">{_fmt(lo)}</text>')
    out.append(f'<text x="{width - 60}" y="{height - 2}" font-size="10">{_fmt(hi)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
