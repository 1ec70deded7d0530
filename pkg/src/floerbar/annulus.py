"""Geometric front end: intersections of the zero section with graph(dg_t)
in the annulus S^1 x (-1, 1), the hole-counting differential from embedded
bigons, and bifurcation detection along the time parameter.

The circle function is g_t(theta) = sum_k c_k(t) cos(k theta) + s_k(t)
sin(k theta) with polynomial-in-t coefficients.  Intersection points are the
zeros of g_t'; the action of an intersection is g_t at that angle.  Each
local minimum bounds two embedded bigons against its neighboring maxima, and
a bigon contributes T when it covers the marked hole.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bifurcation import BifurcationEvent, PiecewiseFamily, handle_slide_map, verify_birth_identities
from .complexes import Chain, FilteredComplex, chain_add, validate
from .errors import HoleOnCurveError, InputError, NonGenericError, NonTransverseError, SamplingError, SlideError
from .poly2 import ONE, T as POLY_T, PolyT

TWO_PI = 2.0 * math.pi
GRID_N = 4096
HESSIAN_FLOOR = 1e-8
MIN_CELL = 1e-9


@dataclass(frozen=True)
class Tolerances:
    root: float = 1e-10
    bifurcation: float = 1e-9
    tie: float = 1e-9
    death_gap: float = 1e-6

    def __post_init__(self):
        for name in ("root", "bifurcation", "tie", "death_gap"):
            if getattr(self, name) <= 0:
                raise InputError(f"tolerance {name!r} must be positive")


@dataclass(frozen=True)
class Harmonic:
    k: int
    cos_t_poly: tuple[float, ...] = ()
    sin_t_poly: tuple[float, ...] = ()

    def __post_init__(self):
        if self.k < 0:
            raise InputError("harmonic index must be non-negative")


@dataclass(frozen=True)
class AnnulusScenario:
    """A time family of circle functions plus the marked hole."""

    harmonics: tuple[Harmonic, ...]
    t_range: tuple[float, float]
    hole: tuple[float, float]  # (theta, fiber coordinate r)
    tolerances: Tolerances = field(default_factory=Tolerances)

    def __post_init__(self):
        a, b = self.t_range
        if not a < b:
            raise InputError("t_range must be an increasing interval")

    def coeffs_at(self, t: float) -> list[tuple[int, float, float]]:
        out = []
        for h in self.harmonics:
            c = float(np.polynomial.polynomial.polyval(t, h.cos_t_poly)) if h.cos_t_poly else 0.0
            s = float(np.polynomial.polynomial.polyval(t, h.sin_t_poly)) if h.sin_t_poly else 0.0
            out.append((h.k, c, s))
        return out

    def g(self, t: float, theta):
        acc = 0.0
        for k, c, s in self.coeffs_at(t):
            acc = acc + c * np.cos(k * np.asarray(theta)) + s * np.sin(k * np.asarray(theta))
        return acc

    def g1(self, t: float, theta):
        acc = 0.0
        for k, c, s in self.coeffs_at(t):
            acc = acc + k * (-c * np.sin(k * np.asarray(theta)) + s * np.cos(k * np.asarray(theta)))
        return acc

    def g2(self, t: float, theta):
        acc = 0.0
        for k, c, s in self.coeffs_at(t):
            acc = acc + k * k * (-c * np.cos(k * np.asarray(theta)) - s * np.sin(k * np.asarray(theta)))
        return acc


@dataclass(frozen=True)
class CriticalPoint:
    theta: float
    value: float
    kind: str  # "min" | "max"


# ---------------------------------------------------------------------------
# root scanning


def _root_scan(sc: AnnulusScenario, t: float) -> list[float]:
    """All zeros of g_t' on [0, 2pi), resolved down to the root tolerance.

    Cells that cannot be excluded by a local derivative bound are subdivided,
    so near-tangent root pairs are still found without the cost exploding in
    flat regions.  A cell that bottoms out right on a tangency (g' and g''
    both numerically zero) raises NonTransverse.
    """
    coeffs = sc.coeffs_at(t)
    if all(c == 0.0 and s == 0.0 for k, c, s in coeffs if k > 0):
        raise NonTransverseError(t, "the circle function is constant")
    thetas = np.linspace(0.0, TWO_PI, GRID_N, endpoint=False)
    vals = np.asarray(sc.g1(t, thetas), dtype=float)
    slopes = np.asarray(sc.g2(t, thetas), dtype=float)
    # bound for the variation of g'' between sample points
    k3 = sum(abs(k) ** 3 * (abs(c) + abs(s)) for k, c, s in coeffs) + 1e-12
    root_tol = sc.tolerances.root

    def f(x: float) -> float:
        return float(sc.g1(t, x))

    def bisect(a, b, fa, fb) -> float:
        while b - a > root_tol:
            m = 0.5 * (a + b)
            fm = f(m)
            if fm == 0.0:
                return m
            if (fa < 0) != (fm < 0):
                b, fb = m, fm
            else:
                a, fa = m, fm
        return 0.5 * (a + b)

    roots: list[float] = []
    step = TWO_PI / GRID_N
    # vectorized prefilter: keep cells with a sign change or where the local
    # bound cannot rule out a hidden root
    nxt_vals = np.roll(vals, -1)
    nxt_slopes = np.roll(slopes, -1)
    change = (vals < 0) != (nxt_vals < 0)
    cell_bound = np.maximum(np.abs(slopes), np.abs(nxt_slopes)) + k3 * step
    excluded = (np.abs(vals) > step * cell_bound) | (np.abs(nxt_vals) > step * cell_bound)
    keep = np.nonzero(change | ~excluded | (vals == 0.0))[0]
    stack = [(float(thetas[i]), float(thetas[i]) + step, float(vals[i]),
              float(nxt_vals[i]), float(slopes[i]), float(nxt_slopes[i]))
             for i in keep]
    while stack:
        a, b, fa, fb, sa, sb = stack.pop()
        if fa == 0.0:
            roots.append(a)
            continue
        if (fa < 0) != (fb < 0) and fb != 0.0:
            roots.append(bisect(a, b, fa, fb))
            continue
        width = b - a
        m = 0.5 * (a + b)
        fm = f(m)
        sm = float(sc.g2(t, m))
        bound = max(abs(sa), abs(sm), abs(sb)) + k3 * width  # local |g''| bound
        if abs(fa) > width * bound or abs(fb) > width * bound \
                or abs(fm) > 0.5 * width * bound:
            continue  # |f| cannot reach zero inside the cell
        if width <= MIN_CELL:
            # bottomed out without a sign change; only a genuine tangency
            # (g' and g'' both vanish here) is an error
            if abs(fm) < HESSIAN_FLOOR and abs(sm) < HESSIAN_FLOOR:
                raise NonTransverseError(t, f"tangency of the two curves near theta={m!r}")
            continue
        stack.append((a, m, fa, fm, sa, sm))
        stack.append((m, b, fm, fb, sm, sb))

    roots = sorted(r % TWO_PI for r in roots)
    merged: list[float] = []
    for r in roots:
        if merged and r - merged[-1] < 2 * root_tol:
            continue
        merged.append(r)
    if len(merged) > 1 and (merged[0] + TWO_PI) - merged[-1] < 2 * root_tol:
        merged.pop()
    return merged


def critical_points(scenario: AnnulusScenario, t: float) -> list[CriticalPoint]:
    """Zeros of g_t' classified by the second derivative, sorted by angle."""
    roots = _root_scan(scenario, t)
    pts = []
    for theta in roots:
        h = float(scenario.g2(t, theta))
        if abs(h) < HESSIAN_FLOOR:
            raise NonTransverseError(t, f"degenerate critical point at theta={theta!r}")
        pts.append(CriticalPoint(theta, float(scenario.g(t, theta)),
                                 "max" if h < 0 else "min"))
    if len(pts) < 2 or len(pts) % 2 != 0:
        raise NonTransverseError(t, f"found {len(pts)} critical points; scan inconsistent")
    for p, q in zip(pts, pts[1:] + pts[:1]):
        if p.kind == q.kind:
            raise NonTransverseError(t, "minima and maxima fail to alternate; scan inconsistent")
    return pts


# ---------------------------------------------------------------------------
# the hole-counting complex


def _arc_contains(alpha: float, beta: float, theta: float) -> bool:
    """Whether theta lies strictly inside the counterclockwise arc (alpha, beta)."""
    span = (beta - alpha) % TWO_PI
    off = (theta - alpha) % TWO_PI
    return 0.0 < off < span


def _check_hole(sc: AnnulusScenario, t: float) -> tuple[float, float, float]:
    theta_h, r_h = sc.hole
    theta_h %= TWO_PI
    if r_h == 0.0:
        raise InputError("the hole may not lie on the zero section (r = 0)")
    if abs(r_h) >= 1.0:
        raise InputError("the hole must lie inside the annulus (|r| < 1)")
    g1h = float(sc.g1(t, theta_h))
    if abs(g1h - r_h) <= sc.tolerances.root:
        raise HoleOnCurveError(f"hole lies on graph(dg) at t={t!r}")
    return theta_h, r_h, g1h


def _complex_from_points(sc: AnnulusScenario, t: float,
                         pts: list[CriticalPoint], names: list[str]) -> FilteredComplex:
    theta_h, r_h, g1h = _check_hole(sc, t)
    hole_in_fiber = (0.0 < r_h < g1h) or (g1h < r_h < 0.0)
    n = len(pts)
    diff: dict[str, Chain] = {}
    for i, p in enumerate(pts):
        if p.kind != "min":
            continue
        left, right = (i - 1) % n, (i + 1) % n
        row: Chain = {}
        for j, arc in ((left, (pts[left].theta, p.theta)),
                       (right, (p.theta, pts[right].theta))):
            covered = hole_in_fiber and _arc_contains(arc[0], arc[1], theta_h)
            row = chain_add(row, {names[j]: POLY_T if covered else ONE})
        if row:
            diff[names[i]] = row
    C = FilteredComplex.build("F2T", [(names[i], pts[i].value) for i in range(n)],
                              diff, strict=True)
    report = validate(C, sc.tolerances.tie)
    if not report.ok:
        raise InputError(f"geometric complex failed validation at t={t!r}: {report}")
    return C


def floer_complex(scenario: AnnulusScenario, t: float) -> FilteredComplex:
    """The hole-counting complex of the zero section against graph(dg_t).

    The fiber scale is not enforced: the bigon combinatorics only needs the
    hole to stay off both curves, so a graph overshooting |r| = 1 is treated
    as living in a wider codisk bundle.
    """
    pts = critical_points(scenario, t)
    names = [("M" if p.kind == "max" else "m") + str(i) for i, p in enumerate(pts)]
    return _complex_from_points(scenario, t, pts, names)


# ---------------------------------------------------------------------------
# bifurcation detection


def _count(sc: AnnulusScenario, t: float, span: float) -> int:
    """Critical point count with a deterministic nudge off degenerate times."""
    for attempt in range(3):
        try:
            return len(critical_points(sc, t + attempt * span * 1e-5))
        except NonTransverseError:
            if attempt == 2:
                raise
    raise AssertionError("unreachable")


def _circ_dist(a: float, b: float) -> float:
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def _align(old: list[float], new: list[float]) -> tuple[float, float, int]:
    """Order-preserving circular alignments old[i] -> new[(i+shift) % n];
    returns (best max distance, second-best max distance, best shift)."""
    n = len(old)
    costs = []
    for shift in range(n):
        costs.append((max(_circ_dist(old[i], new[(i + shift) % n]) for i in range(n)),
                      shift))
    costs.sort()
    second = costs[1][0] if len(costs) > 1 else math.inf
    return costs[0][0], second, costs[0][1]


def _align_unambiguous(old: list[float], new: list[float], where: str) -> int:
    """Shift of the unique good alignment; ambiguity raises SamplingError."""
    best, second, shift = _align(old, new)
    if best > 1e-6 and best > 0.35 * second:
        raise SamplingError(f"ambiguous generator matching {where}")
    return shift


def _match_with_new_pair(old: list[float], new: list[float]) -> tuple[dict[int, int], tuple[int, int]] | None:
    """Match each old angle to a new one, leaving one adjacent new pair over.

    Returns (old index -> new index, (new pair indices)) for the best
    adjacent-pair removal, or None when the choice of pair is ambiguous.
    """
    n_new = len(new)
    assert len(old) + 2 == n_new
    options = []
    for p in range(n_new):
        q = (p + 1) % n_new
        rest = [i for i in range(n_new) if i not in (p, q)]
        cost, _, shift = _align(old, [new[i] for i in rest])
        options.append((cost, shift, p, q, rest))
    options.sort(key=lambda o: o[0])
    cost, shift, p, q, rest = options[0]
    if len(options) > 1 and cost > 1e-6 and cost > 0.35 * options[1][0]:
        return None
    mapping = {i: rest[(i + shift) % len(rest)] for i in range(len(old))}
    return mapping, (p, q)


def detect_bifurcations(scenario: AnnulusScenario, n_samples: int) -> list[tuple[float, str]]:
    """Locate the birth/death times on a uniform grid, refined by bisection.

    Only simple events are accepted: the generator count must change by
    exactly two and the new pair must be circle-adjacent with the matched
    points keeping their kinds; anything else (for instance a symmetric
    pitchfork) raises NonGeneric and the scenario should be perturbed.
    Grids too coarse to separate the events fail detection rather than
    mislabel them.
    """
    if n_samples < 2:
        raise InputError("need at least 2 samples")
    t0, t1 = scenario.t_range
    ts = list(np.linspace(t0, t1, n_samples))
    span = t1 - t0
    tol = scenario.tolerances.bifurcation
    counts = [_count(scenario, t, span) for t in ts]

    events: list[tuple[float, str]] = []
    for (ta, ca), (tb, cb) in zip(zip(ts, counts), zip(ts[1:], counts[1:])):
        if ca == cb:
            continue
        lo, hi, clo, chi = ta, tb, ca, cb
        while hi - lo > tol:
            mid = 0.5 * (lo + hi)
            cm = _count(scenario, mid, span)
            if cm == clo:
                lo = mid
            else:
                hi, chi = mid, cm
        t_star = 0.5 * (lo + hi)
        delta = chi - clo
        if abs(delta) != 2:
            raise NonGenericError(t_star, f"generator count jumps by {delta}")
        kind = "birth" if delta > 0 else "death"
        _genericity_gate(scenario, t_star, kind, tol)
        events.append((t_star, kind))
    return events


def _genericity_gate(sc: AnnulusScenario, t_star: float, kind: str, tol: float) -> None:
    probe = max(10 * tol, 1e-7)
    before = critical_points(sc, t_star - probe)
    after = critical_points(sc, t_star + probe)
    few, many = (before, after) if kind == "birth" else (after, before)
    matched = _match_with_new_pair([p.theta for p in few], [p.theta for p in many])
    if matched is None:
        raise NonGenericError(t_star, "cannot match intersections across the event")
    mapping, (p, q) = matched
    gaps = [_circ_dist(a.theta, b.theta) for a, b in zip(few, few[1:] + few[:1])]
    threshold = 0.4 * min(gaps)
    for i, j in mapping.items():
        d_match = _circ_dist(few[i].theta, many[j].theta)
        if d_match > threshold:
            raise NonGenericError(
                t_star, "surviving intersections move too far across the event")
        if few[i].kind != many[j].kind:
            raise NonGenericError(
                t_star, f"matched intersection flips kind across the event "
                        f"(symmetric pitchfork at theta={many[j].theta!r})")
        for new_idx in (p, q):
            if _circ_dist(few[i].theta, many[new_idx].theta) < d_match:
                raise NonGenericError(
                    t_star, f"an existing intersection sits on the new pair "
                            f"(symmetric pitchfork at theta={many[new_idx].theta!r}); "
                            f"perturb the scenario")
    if many[p].kind == many[q].kind:
        raise NonGenericError(t_star, "the new pair is not a min/max pair")


# ---------------------------------------------------------------------------
# building the family


def _tangency(sc: AnnulusScenario, t_star: float, theta_lo: float, theta_hi: float) -> tuple[float, float]:
    """Angle and value of the tangency at the event time, bracketed by the
    newborn pair.  The second derivative changes sign across it."""
    root_tol = sc.tolerances.root
    span = (theta_hi - theta_lo) % TWO_PI
    a = theta_lo - 0.2 * span
    b = theta_lo + 1.2 * span

    def f(x):
        return float(sc.g2(t_star, x))

    fa, fb = f(a), f(b)
    if (fa < 0) == (fb < 0):
        # fall back to the finest |g1| minimum on a local grid
        xs = np.linspace(a, b, 2049)
        v = np.abs(np.asarray(sc.g1(t_star, xs), dtype=float))
        theta = float(xs[int(np.argmin(v))])
        return theta % TWO_PI, float(sc.g(t_star, theta))
    while b - a > root_tol:
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0.0:
            a = b = m
            break
        if (fa < 0) != (fm < 0):
            b, fb = m, fm
        else:
            a, fa = m, fm
    theta = 0.5 * (a + b)
    return theta % TWO_PI, float(sc.g(t_star, theta))


def evolve(scenario: AnnulusScenario, n_samples: int) -> PiecewiseFamily:
    """Sample the family, matching generators across samples by angle, and
    emit the birth/death/handle-slide events that connect the samples.

    A birth is inserted at the sample before the geometric event, at the
    common limiting level, and the explicit chain isomorphism carries the
    complex across the event time; deaths are the mirror image.
    """
    if n_samples < 2:
        raise InputError("need at least 2 samples for evolve")
    t0, t1 = scenario.t_range
    tol = scenario.tolerances.bifurcation
    events_geo = detect_bifurcations(scenario, n_samples)

    ts = [float(x) for x in np.linspace(t0, t1, n_samples)]
    exclusion = max(20 * tol, 1e-6)
    for t_star, _ in events_geo:
        for i, t in enumerate(ts):
            if abs(t - t_star) < exclusion:
                ts[i] = t_star - exclusion if t <= t_star else t_star + exclusion
    if any(b <= a for a, b in zip(ts, ts[1:])):
        raise SamplingError("samples collide around an event; increase the sample count")

    transition_of: dict[int, tuple[float, str]] = {}
    for t_star, kind in events_geo:
        ks = [k for k in range(len(ts) - 1) if ts[k] < t_star < ts[k + 1]]
        if len(ks) != 1:
            raise SamplingError(f"event at t={t_star!r} is not bracketed by the samples")
        if ks[0] in transition_of:
            raise SamplingError("two events inside one sampling step; increase the sample count")
        transition_of[ks[0]] = (t_star, kind)

    pts0 = critical_points(scenario, ts[0])
    names0 = [("M" if p.kind == "max" else "m") + str(i) for i, p in enumerate(pts0)]
    samples: list[tuple[float, FilteredComplex]] = [
        (ts[0], _complex_from_points(scenario, ts[0], pts0, names0))]
    all_points: list[list[CriticalPoint]] = [pts0]
    all_names: list[list[str]] = [names0]
    events: list[BifurcationEvent] = []
    birth_no = 0

    for k in range(len(ts) - 1):
        t_next = ts[k + 1]
        pts_new = critical_points(scenario, t_next)
        pts_old, names_old = all_points[k], all_names[k]
        event = transition_of.get(k)

        if event is None:
            if len(pts_new) != len(pts_old):
                raise SamplingError(
                    f"generator count changed without a detected event near t={t_next!r}")
            shift = _align_unambiguous([p.theta for p in pts_old],
                                       [p.theta for p in pts_new],
                                       f"near t={t_next!r}")
            names_new = [""] * len(pts_new)
            for i in range(len(pts_old)):
                names_new[(i + shift) % len(pts_new)] = names_old[i]
        else:
            t_star, kind = event
            if kind == "birth":
                matched = _match_with_new_pair([p.theta for p in pts_old],
                                               [p.theta for p in pts_new])
                if matched is None:
                    raise SamplingError(f"cannot match generators across the birth at t={t_star!r}")
                mapping, (p, q) = matched
                names_new = [""] * len(pts_new)
                for i, j in mapping.items():
                    names_new[j] = names_old[i]
                c_idx, d_idx = (p, q) if pts_new[p].value < pts_new[q].value else (q, p)
                c_name, d_name = f"c{birth_no}", f"d{birth_no}"
                birth_no += 1
                names_new[c_idx], names_new[d_idx] = c_name, d_name
            else:  # death
                matched = _match_with_new_pair([p.theta for p in pts_new],
                                               [p.theta for p in pts_old])
                if matched is None:
                    raise SamplingError(f"cannot match generators across the death at t={t_star!r}")
                mapping, (p, q) = matched  # p, q index into pts_old
                inv = {j: i for i, j in mapping.items()}
                names_new = [""] * len(pts_new)
                for j_old, i_new in inv.items():
                    names_new[i_new] = names_old[j_old]

        C_next = _complex_from_points(scenario, t_next, pts_new, names_new)

        if event is not None:
            t_star, kind = event
            if kind == "birth":
                theta_c = pts_new[c_idx].theta
                theta_d = pts_new[d_idx].theta
                lo, hi = (theta_c, theta_d) if _arc_contains(theta_c, theta_d, 0.5 * (theta_c + theta_d)) \
                    else (theta_d, theta_c)
                theta_star, level = _tangency(scenario, t_star, min(theta_c, theta_d),
                                              max(theta_c, theta_d))
                events.append(BifurcationEvent(ts[k], "birth", c_name, d_name, level=level))
                diff0 = dict(samples[k][1].differential)
                diff0[c_name] = {d_name: ONE}
                D0 = FilteredComplex(C_next.ring, C_next.generators, diff0, strict=True)
                rep = validate(D0, scenario.tolerances.tie)
                if not rep.ok:
                    raise SamplingError(f"pre-slide complex invalid near t={t_star!r}: {rep}")
                birth_rep = verify_birth_identities(D0, C_next, c_name, d_name,
                                                    scenario.tolerances.tie)
                if not birth_rep.ok:
                    raise SlideError(f"birth identities fail at t={t_star!r}: {birth_rep}")
                H = handle_slide_map(D0, C_next, c_name, d_name, scenario.tolerances.tie)
                events.append(BifurcationEvent(t_star, "slide", c_name, d_name, map=H))
            else:
                c_name, d_name = (names_old[p], names_old[q]) \
                    if pts_old[p].value < pts_old[q].value else (names_old[q], names_old[p])
                theta_star, level = _tangency(scenario, t_star,
                                              min(pts_old[p].theta, pts_old[q].theta),
                                              max(pts_old[p].theta, pts_old[q].theta))
                C_prev = samples[k][1]
                diff_split = dict(C_next.differential)
                diff_split[c_name] = {d_name: ONE}
                D_split = FilteredComplex(C_prev.ring, C_prev.generators, diff_split,
                                          strict=True)
                rep = validate(D_split, scenario.tolerances.tie)
                if not rep.ok:
                    raise SamplingError(f"post-slide complex invalid near t={t_star!r}: {rep}")
                birth_rep = verify_birth_identities(D_split, C_prev, c_name, d_name,
                                                    scenario.tolerances.tie)
                if not birth_rep.ok:
                    raise SlideError(f"death identities fail at t={t_star!r}: {birth_rep}")
                H = handle_slide_map(D_split, C_prev, c_name, d_name, scenario.tolerances.tie)
                events.append(BifurcationEvent(t_star, "slide", c_name, d_name,
                                               map=H.inverse()))
                events.append(BifurcationEvent(0.5 * (t_star + t_next), "death",
                                               c_name, d_name, level=level))

        samples.append((t_next, C_next))
        all_points.append(pts_new)
        all_names.append(names_new)

    return PiecewiseFamily(tuple(samples), tuple(events), ())


# ---------------------------------------------------------------------------
# JSON


def scenario_to_json(sc: AnnulusScenario) -> dict:
    return {
        "harmonics": [{"k": h.k,
                       "cos_t_poly": list(h.cos_t_poly),
                       "sin_t_poly": list(h.sin_t_poly)} for h in sc.harmonics],
        "t_range": list(sc.t_range),
        "hole": {"theta": sc.hole[0], "r": sc.hole[1]},
        "tolerances": {"root": sc.tolerances.root,
                       "bifurcation": sc.tolerances.bifurcation,
                       "tie": sc.tolerances.tie,
                       "death_gap": sc.tolerances.death_gap},
    }


def scenario_from_json(obj) -> AnnulusScenario:
    from .complexes import _check_keys

    if not isinstance(obj, dict):
        raise InputError("scenario JSON must be an object")
    _check_keys(obj, {"harmonics", "t_range", "hole", "tolerances"}, "scenario")
    for key in ("harmonics", "t_range", "hole"):
        if key not in obj:
            raise InputError(f"scenario JSON missing field {key!r}")
    harmonics = []
    for h in obj["harmonics"]:
        if not isinstance(h, dict):
            raise InputError("harmonic entries must be objects")
        _check_keys(h, {"k", "cos_t_poly", "sin_t_poly"}, "harmonic")
        if "k" not in h or not isinstance(h["k"], int):
            raise InputError(f"harmonic needs an integer 'k': {h!r}")
        harmonics.append(Harmonic(h["k"],
                                  tuple(float(x) for x in h.get("cos_t_poly", [])),
                                  tuple(float(x) for x in h.get("sin_t_poly", []))))
    tr = obj["t_range"]
    if not (isinstance(tr, list) and len(tr) == 2):
        raise InputError("t_range must be a two-element list")
    hole = obj["hole"]
    if not isinstance(hole, dict):
        raise InputError("hole must be an object")
    _check_keys(hole, {"theta", "r"}, "hole")
    tols = obj.get("tolerances", {})
    if not isinstance(tols, dict):
        raise InputError("tolerances must be an object")
    _check_keys(tols, {"root", "bifurcation", "tie", "death_gap"}, "tolerances")
    defaults = Tolerances()
    tolerances = Tolerances(
        root=float(tols.get("root", defaults.root)),
        bifurcation=float(tols.get("bifurcation", defaults.bifurcation)),
        tie=float(tols.get("tie", defaults.tie)),
        death_gap=float(tols.get("death_gap", defaults.death_gap)),
    )
    return AnnulusScenario(tuple(harmonics), (float(tr[0]), float(tr[1])),
                           (float(hole["theta"]), float(hole["r"])), tolerances)
