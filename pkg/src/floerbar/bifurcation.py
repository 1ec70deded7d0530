"""Birth, death and handle-slide moves, and barcode tracking along families.

A piecewise-continuous family is stored as time-ordered samples with the
elementary moves between them.  Within a transition, births and deaths are
applied at their recorded levels, handle-slides carry an explicit verified
chain isomorphism, and the actions drift continuously to the next sample,
where the differential must match the sampled complex exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .barannikov import (
    Barcode,
    BarannikovBasis,
    _barcode_unchecked,
    barannikov_reduce,
    barcodes_match,
    boundary_depth,
    bottleneck_distance,
    spectral_invariants,
    standardness_test,
)
from .complexes import (
    DEFAULT_DEATH_GAP,
    DEFAULT_TIE_TOL,
    F2T,
    Chain,
    ChainMap,
    FilteredComplex,
    Generator,
    action_of,
    chain_add,
    chain_canon,
    chain_scale,
    chains_equal,
    evaluation_map,
    validate,
)
from .errors import GammaUndefinedError, InputError, SlideError, TrackingError
from .poly2 import ONE, PolyT

_Z = PolyT(0)


# ---------------------------------------------------------------------------
# events


@dataclass(frozen=True)
class BirthDatum:
    c: str
    d: str
    level: float


@dataclass(frozen=True)
class BifurcationEvent:
    """A tagged elementary move.

    Births and deaths carry the common action level of the pair; slides carry
    the chain isomorphism between the complexes on either side.
    """

    time: float
    kind: str  # "birth" | "death" | "slide"
    c: str
    d: str
    level: float | None = None
    map: ChainMap | None = None

    def __post_init__(self):
        if self.kind not in ("birth", "death", "slide"):
            raise InputError(f"unknown event kind {self.kind!r}")
        if self.kind in ("birth", "death") and self.level is None:
            raise InputError(f"{self.kind} event needs a level")
        if self.kind == "slide" and self.map is None:
            raise InputError("slide event needs its chain map")


def event_to_json(e: BifurcationEvent) -> dict:
    out = {"time": e.time, "kind": e.kind, "c": e.c, "d": e.d}
    if e.level is not None:
        out["level"] = e.level
    return out


def event_from_json(obj) -> BifurcationEvent:
    if not isinstance(obj, dict):
        raise InputError("event JSON must be an object")
    extra = set(obj) - {"time", "kind", "c", "d", "level"}
    if extra:
        raise InputError(f"unknown field(s) {sorted(extra)} in event")
    for key in ("time", "kind", "c", "d"):
        if key not in obj:
            raise InputError(f"event JSON missing field {key!r}")
    if obj["kind"] == "slide":
        raise InputError("slide events cannot be rebuilt from JSON alone")
    return BifurcationEvent(float(obj["time"]), obj["kind"], obj["c"], obj["d"],
                            level=float(obj["level"]) if "level" in obj else None)


# ---------------------------------------------------------------------------
# birth and death


def apply_birth(C: FilteredComplex, datum: BirthDatum) -> FilteredComplex:
    """Direct sum with the two-generator summand d(c) = d at a common level."""
    for name in (datum.c, datum.d):
        if name in C._index:
            raise InputError(f"generator name {name!r} already used")
    if datum.c == datum.d:
        raise InputError("birth needs two distinct names")
    gens = C.generators + (Generator(datum.d, datum.level), Generator(datum.c, datum.level))
    diff = dict(C.differential)
    diff[datum.c] = {datum.d: ONE}
    return FilteredComplex(C.ring, gens, diff, strict=False)


def _recompute_strict(C: FilteredComplex) -> FilteredComplex:
    strict = all(C.action(y) > C.action(x)
                 for x, row in C.differential.items() for y in row)
    if strict == C.strict:
        return C
    return FilteredComplex(C.ring, C.generators, C.differential, strict)


def apply_death(C: FilteredComplex, c: str, d: str,
                death_gap: float = DEFAULT_DEATH_GAP,
                tie_tol: float = DEFAULT_TIE_TOL) -> FilteredComplex:
    """Cancel the pair (c, d) and return the complementary summand.

    Requires <dc, d> = 1 and nearly equal actions.  The cancellation change
    of basis (x -> x + <dx,d> c, d -> dc) is performed internally; it is
    filtration-compatible because every surviving entry keeps its action up
    to the death gap.
    """
    if c not in C._index or d not in C._index:
        raise InputError("death names are not generators")
    if not C.entry(c, d).is_unit():
        raise InputError(f"<d({c!r}), {d!r}> is not 1; the pair cannot cancel")
    lc, ld = C.action(c), C.action(d)
    if abs(lc - ld) > death_gap:
        raise InputError(f"actions of {c!r} and {d!r} differ by {abs(lc - ld)!r} > death gap")

    tol = tie_tol + death_gap
    rows: dict[str, Chain] = {}
    dc = C.row(c)
    for x in C.names:
        if x in (c, d):
            continue
        ex = C.entry(x, d)
        row = C.row(x)
        if ex:
            row = chain_add(row, chain_scale(ex, dc))  # x' = x + ex*c
        rows[x] = row

    # rewrite targets: d = d' + w with d' = dc; on the surviving rows the
    # d-coefficient is already zero, so only the c-column needs a check
    keep = [g for g in C.generators if g.name not in (c, d)]
    diff: dict[str, Chain] = {}
    for x in C.names:
        if x in (c, d):
            continue
        row = rows[x]
        if row.get(c):
            raise InputError(f"summand split impossible: d({x!r}) still hits {c!r}")
        if row.get(d):
            raise InputError(f"summand split impossible: d({x!r}) still hits {d!r}")
        for y in row:
            if C.action(y) < C.action(x) - tol:
                raise InputError(
                    f"summand split impossible under filtration compatibility: "
                    f"d({x!r}) reaches action {C.action(y)!r}")
        if row:
            diff[x] = row

    out = FilteredComplex(C.ring, tuple(keep), diff, C.strict)
    report = validate(out, tie_tol)
    if not report.ok:
        raise InputError(f"death produced an invalid complex: {report}")
    return _recompute_strict(out)


# ---------------------------------------------------------------------------
# the handle-slide isomorphism


def _slide_partition(D: FilteredComplex, c: str, d: str) -> tuple[list[str], list[str]]:
    """Split the other generators into the high block (action >= l(d)) and the
    low block (action <= l(c)); anything strictly between is rejected."""
    lc, ld = D.action(c), D.action(d)
    if not ld > lc:
        raise SlideError(f"need action({d!r}) > action({c!r}), got {ld!r} <= {lc!r}")
    high, low = [], []
    for g in D.generators:
        if g.name in (c, d):
            continue
        if g.action >= ld:
            high.append(g.name)
        elif g.action <= lc:
            low.append(g.name)
        else:
            raise SlideError(
                f"generator {g.name!r} has action strictly between the pair levels")
    # low block ordered by decreasing action: a_1 has the highest action
    low.sort(key=lambda n: (-D.action(n), D.index(n)))
    high.sort(key=lambda n: (-D.action(n), D.index(n)))
    return high, low


def handle_slide_map(D0: FilteredComplex, D1: FilteredComplex,
                     c: str, d: str,
                     tie_tol: float = DEFAULT_TIE_TOL) -> ChainMap:
    """The explicit chain isomorphism across a birth:

        H(b_k) = b_k,  H(c) = c,  H(d) = d1(c),  H(a_i) = a_i + <d1(a_i), d> c.

    D0 must carry the decoupled pair (d0(c) = d, d0(d) = 0) and D1 the unique
    coupling strip <d1(c), d> = 1.  The result is verified to be an
    upper-triangular chain isomorphism; failure signals inconsistent inputs.
    """
    if set(D0.names) != set(D1.names):
        raise SlideError("complexes do not share their generator set")
    for n in D0.names:
        if abs(D0.action(n) - D1.action(n)) > tie_tol:
            raise SlideError(f"actions of {n!r} disagree between the two complexes")
    high, low = _slide_partition(D1, c, d)

    if not chains_equal(D0.row(c), {d: ONE}):
        raise SlideError(f"d0({c!r}) must be exactly {d!r}")
    if chain_canon(D0.row(d)):
        raise SlideError(f"d0({d!r}) must vanish")
    if not D1.entry(c, d).is_unit():
        raise SlideError("there is no unique strip joining c to d: <d1(c), d> != 1")

    matrix: dict[str, Chain] = {n: {n: ONE} for n in high}
    matrix[c] = {c: ONE}
    matrix[d] = dict(D1.row(c))
    for a in low:
        mu = D1.entry(a, d)
        row: Chain = {a: ONE}
        if mu:
            row[c] = mu
        matrix[a] = row

    H = ChainMap(D0, D1, matrix)
    pos = D1.entry_position
    for x, row in matrix.items():
        if not row.get(x, _Z).is_unit():
            raise SlideError(f"H has a non-unit diagonal at {x!r}")
        for y in row:
            if y != x and pos[y] >= pos[x]:
                raise SlideError(f"H is not upper-triangular at [{x!r}][{y!r}]")
    report = H.verify(tie_tol)
    if not report.ok:
        raise SlideError(f"H is not a chain map; inputs are not a legitimate birth: {report}")
    return H


@dataclass(frozen=True)
class BirthReport:
    violations: tuple[tuple[str, str], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        if self.ok:
            return "all birth identities hold"
        return "; ".join(f"({tag}) {msg}" for tag, msg in self.violations)


def verify_birth_identities(D0: FilteredComplex, D1: FilteredComplex,
                            c: str, d: str,
                            tie_tol: float = DEFAULT_TIE_TOL) -> BirthReport:
    """Entrywise check of the coefficient identities across a birth.

    (i)   the high rows agree and the low-low coefficients agree,
    (ii)  <d1 a_i, c> = sum_{j<i} <d1 a_i, a_j><d1 a_j, d>,
    (iii) <d1 a_i, b_k> + <d0 a_i, b_k> = <d1 a_i, d><d1 c, b_k>.
    """
    v: list[tuple[str, str]] = []
    if set(D0.names) != set(D1.names):
        return BirthReport((("input", "complexes do not share their generator set"),))
    try:
        high, low = _slide_partition(D1, c, d)
    except SlideError as exc:
        return BirthReport((("ordering", str(exc)),))

    if not chains_equal(D0.row(c), {d: ONE}):
        v.append(("summand", f"d0({c!r}) != {d!r}"))
    if chain_canon(D0.row(d)):
        v.append(("summand", f"d0({d!r}) != 0"))
    for x in high + low:
        if D0.entry(x, c) or D0.entry(x, d):
            v.append(("summand", f"d0({x!r}) touches the newborn pair"))
    if not D1.entry(c, d).is_unit():
        v.append(("lemma", f"<d1({c!r}), {d!r}> = {D1.entry(c, d)} != 1"))

    for b in high:
        if not chains_equal(D0.row(b), D1.row(b)):
            v.append(("i", f"d0({b!r}) != d1({b!r})"))
    for i, ai in enumerate(low):
        for aj in low:
            if D0.entry(ai, aj) != D1.entry(ai, aj):
                v.append(("i", f"<d a_i, a_j> differs at ({ai!r}, {aj!r})"))
        lhs = D1.entry(ai, c)
        rhs = _Z
        for aj in low[:i]:
            rhs = rhs + D1.entry(ai, aj) * D1.entry(aj, d)
        if lhs != rhs:
            v.append(("ii", f"<d1 {ai!r}, {c!r}> = {lhs} but the product sum is {rhs}"))
        for bk in high:
            lhs3 = D1.entry(ai, bk) + D0.entry(ai, bk)
            rhs3 = D1.entry(ai, d) * D1.entry(c, bk)
            if lhs3 != rhs3:
                v.append(("iii", f"product formula fails at ({ai!r}, {bk!r}): "
                                 f"{lhs3} != {rhs3}"))
    return BirthReport(tuple(v))


# ---------------------------------------------------------------------------
# basis propagation


def propagate_basis(basis: BarannikovBasis, event: BifurcationEvent) -> BarannikovBasis:
    """Carry a Barannikov basis through one elementary move.

    Birth appends the newborn pair, death removes it (after projecting the
    other chains off the cancelled summand), a slide applies its chain map.
    The result is re-verified against the post-event complex.
    """
    C = basis.complex
    if event.kind == "birth":
        post = apply_birth(C, BirthDatum(event.c, event.d, float(event.level)))
        out = BarannikovBasis(post,
                              basis.pairs + (({event.c: ONE}, {event.d: ONE}),),
                              basis.cycles)
    elif event.kind == "death":
        post = apply_death(C, event.c, event.d)
        out = _drop_pair(basis, post, event.c, event.d)
    elif event.kind == "slide":
        H = event.map
        if H is None:
            raise InputError("slide event carries no chain map")
        if set(H.source.names) != set(C.names):
            raise InputError("slide source does not match the basis complex")
        out = BarannikovBasis(
            H.target,
            tuple((H.apply(a), H.apply(b)) for a, b in basis.pairs),
            tuple(H.apply(z) for z in basis.cycles),
        )
    else:  # pragma: no cover
        raise InputError(f"unknown event kind {event.kind!r}")

    problems = out.verify()
    if problems:
        raise InputError(
            f"basis does not survive the {event.kind} event: " + "; ".join(problems))
    return out


def _drop_pair(basis: BarannikovBasis, post: FilteredComplex,
               c: str, d: str) -> BarannikovBasis:
    """Remove the cancelled pair and project the other chains off c and d.

    The chain carrying c must be the a-chain of exactly one pair (with unit
    coefficient); dropping the c and d coordinates of the other chains is a
    compatible change of basis on the complement.
    """
    special = [i for i, (a, _b) in enumerate(basis.pairs) if a.get(c)]
    if len(special) != 1 or any(z.get(c) for z in basis.cycles) \
            or any(b.get(c) for _a, b in basis.pairs):
        raise InputError(f"basis/event mismatch: {c!r} is not carried by a unique pair")
    i0 = special[0]
    if not basis.pairs[i0][0].get(c, _Z).is_unit():
        raise InputError(f"basis/event mismatch: coefficient of {c!r} is not a unit")

    def proj(ch: Chain) -> Chain:
        return {g: p for g, p in ch.items() if g not in (c, d)}

    pairs = []
    for i, (a, b) in enumerate(basis.pairs):
        if i == i0:
            continue
        pairs.append((proj(a), proj(b)))
    cycles = [proj(z) for z in basis.cycles]
    if any(not chain_canon(ch) for pr in pairs for ch in pr) or \
            any(not chain_canon(z) for z in cycles):
        raise InputError("basis/event mismatch: a chain vanishes off the summand")
    return BarannikovBasis(post, tuple(pairs), tuple(cycles))


# ---------------------------------------------------------------------------
# families and tracking


@dataclass(frozen=True)
class PiecewiseFamily:
    """Time-ordered complex samples joined by elementary moves.

    ``identifications[k]`` renames the surviving generators of sample k into
    the names of sample k+1 (identity entries may be omitted).
    """

    samples: tuple[tuple[float, FilteredComplex], ...]
    events: tuple[BifurcationEvent, ...] = ()
    identifications: tuple[Mapping[str, str], ...] = ()

    def __post_init__(self):
        times = [t for t, _ in self.samples]
        if len(times) < 1 or any(b <= a for a, b in zip(times, times[1:])):
            raise InputError("sample times must be strictly increasing")
        if self.identifications and len(self.identifications) != len(self.samples) - 1:
            raise InputError("need one identification per consecutive sample pair")
        for e in self.events:
            if not times[0] <= e.time < times[-1]:
                raise InputError(f"event at t={e.time!r} outside the sampled range")

    def identification(self, k: int) -> Mapping[str, str]:
        if self.identifications:
            return self.identifications[k]
        return {}

    def events_in(self, k: int) -> list[BifurcationEvent]:
        t0, t1 = self.samples[k][0], self.samples[k + 1][0]
        return sorted((e for e in self.events if t0 <= e.time < t1),
                      key=lambda e: e.time)

    def validate(self) -> None:
        """Dry tracking run checking the structural family conditions."""
        _walk(self, basis=None, derive_seed=False)


@dataclass(frozen=True)
class TimelinePoint:
    t: float
    barcode: Barcode
    gamma: float
    depth: float

    @property
    def n_bars(self) -> int:
        return len(self.barcode)


@dataclass(frozen=True)
class Timeline:
    points: tuple[TimelinePoint, ...]
    events: tuple[BifurcationEvent, ...] = ()


def timeline_to_csv(tl: Timeline) -> str:
    from .barannikov import _fmt

    lines = ["t,gamma,depth,n_bars"]
    for p in tl.points:
        lines.append(f"{_fmt(p.t)},{_fmt(p.gamma)},{_fmt(p.depth)},{p.n_bars}")
    return "\n".join(lines) + "\n"


def track_family(family: PiecewiseFamily,
                 seed: BarannikovBasis | None = None,
                 tie_tol: float = DEFAULT_TIE_TOL,
                 death_gap: float = DEFAULT_DEATH_GAP) -> Timeline:
    """Propagate a Barannikov basis along the family and certify the barcode.

    At every sample the tracked barcode must agree with the barcodes of both
    evaluations (T = 0 and T = 1), consecutive barcodes must stay within the
    action drift in bottleneck distance, and the number of semi-infinite bars
    must stay constant.  Any failure aborts with the offending time.
    """
    return _walk(family, basis=seed, tie_tol=tie_tol, death_gap=death_gap,
                 derive_seed=True)


def _differentials_equal(A: FilteredComplex, B: FilteredComplex) -> bool:
    xs = set(A.differential) | set(B.differential)
    return all(chain_canon(A.differential.get(x, {})) == chain_canon(B.differential.get(x, {}))
               for x in xs)


def _walk(family: PiecewiseFamily, basis: BarannikovBasis | None,
          tie_tol: float = DEFAULT_TIE_TOL,
          death_gap: float = DEFAULT_DEATH_GAP,
          derive_seed: bool = False) -> Timeline:
    t0, C0 = family.samples[0]
    if C0.ring != F2T:
        raise InputError("families track F2T complexes")

    if basis is None and derive_seed:
        verdict = standardness_test(C0, tie_tol)
        if not verdict.is_standard:
            raise TrackingError(t0, f"seed complex is not standard ({verdict.status}): "
                                    f"{verdict.detail}")
        basis = verdict.witness
    if basis is not None:
        problems = basis.verify(tie_tol)
        if problems:
            raise TrackingError(t0, "seed basis fails verification: " + "; ".join(problems))
        if not _differentials_equal(basis.complex, C0) or \
                set(basis.complex.names) != set(C0.names):
            raise TrackingError(t0, "seed basis does not match the first sample")
        basis = basis.with_complex(C0)

    points = []
    prev_barcode: Barcode | None = None
    prev_semi: int | None = None

    def at_sample(t: float, C: FilteredComplex, drift: float):
        nonlocal prev_barcode, prev_semi
        if basis is None:
            return
        B = _checked_barcode(t, C, basis, tie_tol)
        semi = len(B.semi_infinite())
        if prev_semi is not None and semi != prev_semi:
            raise TrackingError(t, f"semi-infinite bar count changed from {prev_semi} to {semi}",
                                {"barcode": [(b.end, b.start) for b in B]})
        if prev_barcode is not None:
            bound = drift + death_gap + tie_tol
            dist = bottleneck_distance(prev_barcode, B)
            if dist > bound:
                raise TrackingError(t, f"bottleneck jump {dist!r} exceeds the drift bound {bound!r}",
                                    {"distance": dist, "bound": bound})
        try:
            inv = spectral_invariants(B)
            gamma = inv.gamma
        except GammaUndefinedError:
            gamma = math.nan
        points.append(TimelinePoint(t, B, gamma, boundary_depth(B)))
        prev_barcode, prev_semi = B, semi

    C = C0
    at_sample(t0, C0, 0.0)
    for k in range(len(family.samples) - 1):
        t_next, C_next = family.samples[k + 1]
        drift = 0.0
        for e in family.events_in(k):
            if e.kind == "birth":
                if basis is not None:
                    basis = propagate_basis(basis, e)
                    C = basis.complex
                else:
                    C = apply_birth(C, BirthDatum(e.c, e.d, float(e.level)))
            elif e.kind == "death":
                # the pair is pushed to its common limit level before cancelling
                moved = {}
                for n in (e.c, e.d):
                    if n not in C._index:
                        raise TrackingError(e.time, f"death names {e.c!r},{e.d!r} missing")
                    moved[n] = float(e.level)
                    drift = max(drift, abs(C.action(n) - float(e.level)))
                C = C.with_actions(moved)
                if basis is not None:
                    basis = propagate_basis(basis.with_complex(C),
                                            BifurcationEvent(e.time, "death", e.c, e.d,
                                                             level=e.level))
                    C = basis.complex
                else:
                    C = apply_death(C, e.c, e.d, death_gap, tie_tol)
            else:  # slide
                H = e.map
                assert H is not None
                if set(H.source.names) != set(C.names):
                    raise TrackingError(e.time, "slide source names do not match the family state")
                if not _differentials_equal(H.source, C):
                    raise TrackingError(e.time, "slide source differential does not match")
                for n in C.names:
                    drift = max(drift, abs(C.action(n) - H.source.action(n)))
                if basis is not None:
                    basis = propagate_basis(basis.with_complex(H.source), e)
                C = H.target
        # drift into the next sample
        ident = dict(family.identification(k))
        renamed = C.rename(ident) if ident else C
        if set(renamed.names) != set(C_next.names):
            raise TrackingError(t_next, "generator sets do not match across the transition")
        if not _differentials_equal(renamed, C_next):
            raise TrackingError(t_next, "differential changed without an event")
        for n in renamed.names:
            drift = max(drift, abs(renamed.action(n) - C_next.action(n)))
        if basis is not None:
            basis = basis.rename(ident, C_next)
        C = C_next
        at_sample(t_next, C, drift)
    return Timeline(tuple(points), family.events)


def _checked_barcode(t: float, C: FilteredComplex, basis: BarannikovBasis,
                     tie_tol: float) -> Barcode:
    problems = basis.verify(tie_tol)
    if problems:
        raise TrackingError(t, "tracked basis fails verification: " + "; ".join(problems))
    B = _barcode_unchecked(basis)
    for beta in (0, 1):
        Cb, _ = evaluation_map(C, beta)
        Bb = _barcode_unchecked(barannikov_reduce(Cb))
        if not barcodes_match(B, Bb, max(tie_tol, 1e-9)):
            raise TrackingError(
                t, f"barcode of the T-complex disagrees with the evaluation at {beta}",
                {"tracked": [(b.end, b.start) for b in B],
                 f"ev{beta}": [(b.end, b.start) for b in Bb]})
    return B
