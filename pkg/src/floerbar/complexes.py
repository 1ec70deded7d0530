"""Filtered chain complexes over GF(2) and GF(2)[T].

Conventions used throughout the package:

* A chain is a sparse dict ``{generator_name: PolyT}`` with no zero entries.
* A matrix (differential or chain map) is a dict of rows
  ``m[x][y] = coefficient of generator y in the image of generator x``.
* The action of a chain is the infimum of the actions over its support,
  ``+inf`` for the zero chain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping

from .errors import InputError
from .poly2 import ONE, PolyT, poly_eval

Chain = dict[str, PolyT]
Matrix = dict[str, dict[str, PolyT]]

F2 = "F2"
F2T = "F2T"

DEFAULT_TIE_TOL = 1e-9
DEFAULT_DEATH_GAP = 1e-6


# ---------------------------------------------------------------------------
# chain helpers


def chain_canon(chain: Mapping[str, PolyT]) -> Chain:
    """Drop zero coefficients."""
    return {g: p for g, p in chain.items() if p}


def chain_add(a: Mapping[str, PolyT], b: Mapping[str, PolyT]) -> Chain:
    out = dict(a)
    for g, p in b.items():
        q = out.get(g)
        s = p if q is None else p + q
        if s:
            out[g] = s
        elif q is not None:
            del out[g]
    return out


def chain_scale(p: PolyT, a: Mapping[str, PolyT]) -> Chain:
    if not p:
        return {}
    return chain_canon({g: p * q for g, q in a.items()})


def chain_eval(a: Mapping[str, PolyT], beta: int) -> Chain:
    """Send T to beta coefficient-wise."""
    return {g: ONE for g, p in a.items() if poly_eval(p, beta)}


def chains_equal(a: Mapping[str, PolyT], b: Mapping[str, PolyT]) -> bool:
    return chain_canon(a) == chain_canon(b)


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True)
class Generator:
    name: str
    action: float


@dataclass(frozen=True)
class FilteredComplex:
    """Generators with real actions plus a sparse differential.

    ``strict`` complexes require the differential to raise the action
    strictly; weak ones allow equality (a birth summand has two generators
    at the same level).
    """

    ring: str
    generators: tuple[Generator, ...]
    differential: Matrix
    strict: bool = True

    @classmethod
    def build(cls, ring, gens, diff, strict=True) -> "FilteredComplex":
        """Normalizing constructor.

        ``gens`` is a sequence of (name, action) pairs, ``diff`` maps source
        names to {target: PolyT-or-mask-int}.
        """
        generators = tuple(Generator(str(n), float(a)) for n, a in gens)
        matrix: Matrix = {}
        for x, row in diff.items():
            crow = {}
            for y, p in row.items():
                if isinstance(p, int):
                    p = PolyT(p)
                if p:
                    crow[str(y)] = p
            if crow:
                matrix[str(x)] = crow
        return cls(ring, generators, matrix, strict)

    @cached_property
    def names(self) -> tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {g.name: i for i, g in enumerate(self.generators)}

    @cached_property
    def _action(self) -> dict[str, float]:
        return {g.name: g.action for g in self.generators}

    def __len__(self) -> int:
        return len(self.generators)

    def index(self, name: str) -> int:
        return self._index[name]

    def action(self, name: str) -> float:
        try:
            return self._action[name]
        except KeyError:
            raise InputError(f"unknown generator {name!r}") from None

    def row(self, x: str) -> Chain:
        """The chain representing the differential of generator x."""
        return dict(self.differential.get(x, {}))

    def entry(self, x: str, y: str) -> PolyT:
        return self.differential.get(x, {}).get(y, PolyT(0))

    def boundary(self, chain: Mapping[str, PolyT]) -> Chain:
        out: Chain = {}
        for x, p in chain.items():
            if x not in self._index:
                raise InputError(f"unknown generator {x!r}")
            if p:
                out = chain_add(out, chain_scale(p, self.differential.get(x, {})))
        return out

    @cached_property
    def entry_order(self) -> tuple[str, ...]:
        """Generators sorted by decreasing action, ties by list order.

        Within a group of exactly equal actions the order is adjusted so that
        every differential entry inside the group points to an earlier
        position (needed for weak complexes, where a birth pair shares its
        level); a cyclic dependency is rejected.
        """
        order = sorted(self.names, key=lambda n: (-self._action[n], self._index[n]))
        out: list[str] = []
        i = 0
        while i < len(order):
            j = i
            while j < len(order) and self._action[order[j]] == self._action[order[i]]:
                j += 1
            group = order[i:j]
            if len(group) > 1:
                group = self._tie_sort(group)
            out.extend(group)
            i = j
        return tuple(out)

    def _tie_sort(self, group: list[str]) -> list[str]:
        members = set(group)
        # x depends on y when <dx, y> != 0 inside the group: y must precede x
        pending = {x: {y for y in self.differential.get(x, {}) if y in members}
                   for x in group}
        out: list[str] = []
        placed: set[str] = set()
        while len(out) < len(group):
            ready = [x for x in group if x not in placed and pending[x] <= placed]
            if not ready:
                raise InputError(
                    f"cyclic differential inside the action level of {group[0]!r}")
            nxt = min(ready, key=lambda n: self._index[n])
            out.append(nxt)
            placed.add(nxt)
        return out

    @cached_property
    def entry_position(self) -> dict[str, int]:
        return {n: i for i, n in enumerate(self.entry_order)}

    def action_levels(self) -> list[float]:
        """Distinct action values, increasing."""
        return sorted({g.action for g in self.generators})

    def chain_action(self, chain: Mapping[str, PolyT]) -> float:
        return action_of(self, chain)

    def rename(self, mapping: Mapping[str, str]) -> "FilteredComplex":
        """Rename generators; names absent from the mapping are kept."""
        def nm(n):
            return mapping.get(n, n)

        gens = tuple(Generator(nm(g.name), g.action) for g in self.generators)
        diff = {nm(x): {nm(y): p for y, p in row.items()}
                for x, row in self.differential.items()}
        return FilteredComplex(self.ring, gens, diff, self.strict)

    def with_actions(self, actions: Mapping[str, float]) -> "FilteredComplex":
        gens = tuple(Generator(g.name, float(actions.get(g.name, g.action)))
                     for g in self.generators)
        return FilteredComplex(self.ring, gens, self.differential, self.strict)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[tuple[str, str], ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.errors

    def __str__(self) -> str:
        if self.ok:
            return "valid" + (f" ({len(self.notes)} notes)" if self.notes else "")
        return "; ".join(f"{k}: {d}" for k, d in self.errors)


def validate(C: FilteredComplex, tie_tol: float = DEFAULT_TIE_TOL) -> ValidationReport:
    """Report every violated axiom; an empty report means the complex is valid."""
    errors: list[tuple[str, str]] = []
    notes: list[str] = []

    seen: set[str] = set()
    for g in C.generators:
        if g.name in seen:
            errors.append(("duplicate", f"generator name {g.name!r} repeated"))
        seen.add(g.name)
        if not math.isfinite(g.action):
            errors.append(("action_finite", f"generator {g.name!r} has action {g.action!r}"))

    for x, row in C.differential.items():
        if x not in seen:
            errors.append(("unknown", f"differential row for unknown generator {x!r}"))
            continue
        for y, p in row.items():
            if y not in seen:
                errors.append(("unknown", f"entry d[{x!r}][{y!r}] targets unknown generator"))
                continue
            if C.ring == F2 and p.degree > 0:
                errors.append(("ring", f"entry d[{x!r}][{y!r}]={p} has positive degree in an F2 complex"))
            ax, ay = C._action.get(x), C._action.get(y)
            if ax is None or ay is None:
                continue
            if C.strict:
                if not ay > ax:
                    errors.append(("action", f"entry d[{x!r}][{y!r}] does not increase the action ({ax} -> {ay})"))
            else:
                if ay < ax:
                    errors.append(("action", f"entry d[{x!r}][{y!r}] decreases the action ({ax} -> {ay})"))

    # d^2 = 0, checked generator by generator
    for x in C.names:
        row = C.differential.get(x)
        if not row:
            continue
        try:
            sq = C.boundary(row)
        except InputError:
            continue  # unknown-name errors already reported
        for z in sorted(sq, key=lambda n: C._index.get(n, -1)):
            errors.append(("d_squared", f"d(d({x!r})) contains {z!r} with coefficient {sq[z]}"))

    levels = C.action_levels()
    for a, b in zip(levels, levels[1:]):
        if 0 < b - a <= tie_tol:
            notes.append(f"actions {a!r} and {b!r} differ by less than the tie tolerance {tie_tol!r}")

    return ValidationReport(tuple(errors), tuple(notes))


# ---------------------------------------------------------------------------
# the four basic operations


def action_of(C: FilteredComplex, chain: Mapping[str, PolyT]) -> float:
    """Infimum of the actions over the support; +inf for the zero chain."""
    best = math.inf
    for g, p in chain.items():
        if g not in C._index:
            raise InputError(f"unknown generator {g!r} in chain")
        if p:
            best = min(best, C._action[g])
    return best


def truncate_above(C: FilteredComplex, s: float) -> FilteredComplex:
    """Subcomplex spanned by the generators of action > s."""
    keep = {g.name for g in C.generators if g.action > s}
    gens = tuple(g for g in C.generators if g.name in keep)
    diff = {x: {y: p for y, p in row.items() if y in keep}
            for x, row in C.differential.items() if x in keep}
    diff = {x: row for x, row in diff.items() if row}
    return FilteredComplex(C.ring, gens, diff, C.strict)


def evaluation_map(C: FilteredComplex, beta: int) -> tuple[FilteredComplex, "ChainMap"]:
    """Send T to beta; returns the field complex and the evaluation chain map."""
    if C.ring != F2T:
        raise InputError("evaluation_map expects an F2T complex")
    if beta not in (0, 1):
        raise InputError(f"evaluation point must be 0 or 1, got {beta!r}")
    diff = {x: {y: ONE for y, p in row.items() if poly_eval(p, beta)}
            for x, row in C.differential.items()}
    diff = {x: row for x, row in diff.items() if row}
    target = FilteredComplex(F2, C.generators, diff, C.strict)
    ev = ChainMap(C, target, {n: {n: ONE} for n in C.names}, beta=beta)
    return target, ev


def tensor_with_T(C: FilteredComplex) -> FilteredComplex:
    """Promote an F2 complex to F2T with the same generators and entries."""
    if C.ring != F2:
        raise InputError("tensor_with_T expects an F2 complex")
    return FilteredComplex(F2T, C.generators, C.differential, C.strict)


def apply_basis_change(C: FilteredComplex, M: Matrix,
                       tie_tol: float = DEFAULT_TIE_TOL) -> FilteredComplex:
    """Rewrite the differential in the basis new_x = sum_y M[x][y] * old_y.

    M must be invertible over the ring and filtration-compatible together
    with its inverse; the new basis element named x inherits the action of
    the old generator x.
    """
    from . import f2t_linalg as la

    names = C.names
    if set(M) - set(names):
        raise InputError("basis change references unknown generators")
    rows = [[M.get(x, {}).get(y, PolyT(0)) for y in names] for x in names]
    for i, x in enumerate(names):
        if C.ring == F2 and any(p.degree > 0 for p in rows[i]):
            raise InputError("basis change for an F2 complex must have degree-0 entries")
    inv = la.invert(rows)
    if inv is None:
        raise InputError("basis change matrix is not invertible over the ring")

    def check_compat(mat, label):
        for i, x in enumerate(names):
            for j, y in enumerate(names):
                if mat[i][j] and C.action(y) < C.action(x) - tie_tol:
                    raise InputError(
                        f"{label} entry [{x!r}][{y!r}] sends action {C.action(x)} "
                        f"below to {C.action(y)}")

    check_compat(rows, "basis change")
    check_compat(inv, "inverse basis change")

    D = [[C.entry(x, y) for y in names] for x in names]
    new = la.mat_mul(la.mat_mul(rows, D), inv)
    diff = {}
    for i, x in enumerate(names):
        row = {names[j]: new[i][j] for j in range(len(names)) if new[i][j]}
        if row:
            diff[x] = row
    out = FilteredComplex(C.ring, C.generators, diff, C.strict)
    report = validate(out, tie_tol)
    if not report.ok:
        raise InputError(f"basis change produced an invalid complex: {report}")
    return out


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True)
class ChainMap:
    """A map between filtered complexes, written on generators.

    ``matrix[x][y]`` is the coefficient of target generator y in the image
    of source generator x.  Entries live in the target ring.  For the
    evaluation maps (F2T source, F2 target) ``beta`` records the value
    substituted for T when coefficients are transported.
    """

    source: FilteredComplex
    target: FilteredComplex
    matrix: Matrix
    beta: int | None = None

    def apply(self, chain: Mapping[str, PolyT]) -> Chain:
        out: Chain = {}
        for x, p in chain.items():
            if not p:
                continue
            if self.beta is not None:
                p = ONE if poly_eval(p, self.beta) else PolyT(0)
                if not p:
                    continue
            out = chain_add(out, chain_scale(p, self.matrix.get(x, {})))
        return out

    def verify(self, tie_tol: float = DEFAULT_TIE_TOL) -> ValidationReport:
        errors = []
        for x in self.source.names:
            lhs = self.apply(self.source.row(x))
            rhs = self.target.boundary(self.apply({x: ONE}))
            if not chains_equal(lhs, rhs):
                errors.append(("chain_map", f"fails on generator {x!r}"))
        for x, row in self.matrix.items():
            for y, p in row.items():
                if p and self.target.action(y) < self.source.action(x) - tie_tol:
                    errors.append(("filtration",
                                   f"entry [{x!r}][{y!r}] drops the action"))
        return ValidationReport(tuple(errors))

    def inverse(self) -> "ChainMap":
        from . import f2t_linalg as la

        if self.beta is not None:
            raise InputError("evaluation maps are not invertible")
        src, tgt = self.source, self.target
        if set(src.names) != set(tgt.names):
            raise InputError("inverse requires identical generator sets")
        names = src.names
        rows = [[self.matrix.get(x, {}).get(y, PolyT(0)) for y in names] for x in names]
        inv = la.invert(rows)
        if inv is None:
            raise InputError("chain map is not invertible over the ring")
        matrix = {}
        for i, x in enumerate(names):
            row = {names[j]: inv[i][j] for j in range(len(names)) if inv[i][j]}
            if row:
                matrix[x] = row
        return ChainMap(tgt, src, matrix)


# ---------------------------------------------------------------------------
# JSON serialization


def complex_to_json(C: FilteredComplex) -> dict:
    diff = []
    for x in C.names:
        row = C.differential.get(x, {})
        for y in sorted(row, key=C.index):
            diff.append({"from": x, "to": y, "poly": row[y].to_json()})
    return {
        "ring": C.ring,
        "strict": C.strict,
        "generators": [{"name": g.name, "action": g.action} for g in C.generators],
        "differential": diff,
    }


def _check_keys(obj: dict, allowed: set[str], where: str):
    extra = set(obj) - allowed
    if extra:
        raise InputError(f"unknown field(s) {sorted(extra)} in {where}")


def complex_from_json(obj) -> FilteredComplex:
    if not isinstance(obj, dict):
        raise InputError("complex JSON must be an object")
    _check_keys(obj, {"ring", "strict", "generators", "differential"}, "complex")
    for key in ("ring", "strict", "generators", "differential"):
        if key not in obj:
            raise InputError(f"complex JSON missing field {key!r}")
    ring = obj["ring"]
    if ring not in (F2, F2T):
        raise InputError(f"ring must be 'F2' or 'F2T', got {ring!r}")
    if not isinstance(obj["strict"], bool):
        raise InputError("'strict' must be a boolean")
    gens = []
    for g in obj["generators"]:
        if not isinstance(g, dict):
            raise InputError("generator entries must be objects")
        _check_keys(g, {"name", "action"}, "generator")
        if not isinstance(g.get("name"), str) or not isinstance(g.get("action"), (int, float)):
            raise InputError(f"malformed generator entry {g!r}")
        gens.append((g["name"], float(g["action"])))
    diff: Matrix = {}
    for e in obj["differential"]:
        if not isinstance(e, dict):
            raise InputError("differential entries must be objects")
        _check_keys(e, {"from", "to", "poly"}, "differential entry")
        try:
            p = PolyT.from_json(e["poly"])
        except (KeyError, ValueError) as exc:
            raise InputError(f"malformed differential entry {e!r}: {exc}") from None
        if not isinstance(e.get("from"), str) or not isinstance(e.get("to"), str):
            raise InputError(f"malformed differential entry {e!r}")
        if p:
            row = diff.setdefault(e["from"], {})
            if e["to"] in row:
                raise InputError(f"duplicate differential entry {e['from']!r}->{e['to']!r}")
            row[e["to"]] = p
    return FilteredComplex.build(ring, gens, diff, obj["strict"])
