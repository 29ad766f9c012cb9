"""Semi-Zariski sub-basic constraints and discreteness witnesses.

A neighborhood witness for a center ``f`` is a finite list of elements ``g``
with ``fg != gf`` (each giving the open set ``{h : hg != gh}``) together with
finitely many excluded points (each giving ``{h : h != e}``).  Every set is a
sub-basic open set of the semi-Zariski topology, so their intersection ``O``
is open and contains ``f``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Union

from .families import Family, FreshPoints, WindowedSubset, enumerate_filtered
from .relation import FiniteRelation, commutes, compose, from_json, point_set, to_json

__all__ = [
    "UNIT",
    "NeConst",
    "NePair",
    "NeighborhoodReport",
    "NeighborhoodWitness",
    "SearchExhaustedError",
    "TheoremMainReport",
    "TraceStep",
    "WitnessError",
    "constraint_holds",
    "in_neighborhood",
    "isolation_witness",
    "lemma1_family",
    "lemma2_neighborhood",
    "verify_neighborhood",
    "verify_theorem_main",
    "witness_points",
]


class WitnessError(RuntimeError):
    """A constructed witness failed its defining check."""


class SearchExhaustedError(WitnessError):
    """Bounded search found no suitable element."""


class _Unit:
    """The external unit adjoined to ``S``; ``1x = x1 = x``."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "UNIT"


UNIT = _Unit()
UnitOrElem = Union[_Unit, FiniteRelation]


def _mul(*factors):
    # factors may be UNIT, elided from the product; an all-unit product is UNIT
    out = UNIT
    for a in factors:
        if a is UNIT:
            continue
        out = a if out is UNIT else compose(out, a)
    return out


@dataclass(frozen=True)
class NeConst:
    """``{x : a x b != c}``."""

    a: UnitOrElem
    b: UnitOrElem
    c: FiniteRelation


@dataclass(frozen=True)
class NePair:
    """``{x : a x b != c x d}``."""

    a: UnitOrElem
    b: UnitOrElem
    c: UnitOrElem
    d: UnitOrElem


def constraint_holds(c: NeConst | NePair, x: FiniteRelation) -> bool:
    if isinstance(c, NeConst):
        return _mul(c.a, x, c.b) != c.c
    return _mul(c.a, x, c.b) != _mul(c.c, x, c.d)


@dataclass(frozen=True)
class TraceStep:
    x: int
    branch: str
    f_before: tuple[int, ...]
    f_after: tuple[int, ...]

    def to_json(self) -> dict:
        return {"x": self.x, "branch": self.branch,
                "F_before": list(self.f_before), "F_after": list(self.f_after)}


@dataclass
class NeighborhoodWitness:
    center: FiniteRelation
    n: int
    commute_constraints: list[FiniteRelation] = field(default_factory=list)
    exclusions: list[FiniteRelation] = field(default_factory=list)
    trace: list[TraceStep] = field(default_factory=list)

    def constraints(self) -> list[NeConst | NePair]:
        """The witness as sub-basic sets: ``1 x g != g x 1`` and ``1 x 1 != e``."""
        return ([NePair(UNIT, g, g, UNIT) for g in self.commute_constraints]
                + [NeConst(UNIT, UNIT, e) for e in self.exclusions])

    def to_json(self) -> dict:
        return {
            "center": to_json(self.center),
            "n": self.n,
            "commute_constraints": [to_json(g) for g in self.commute_constraints],
            "exclusions": [to_json(e) for e in self.exclusions],
            "trace": [t.to_json() for t in self.trace],
        }

    @classmethod
    def from_json(cls, data: dict) -> "NeighborhoodWitness":
        return cls(
            center=from_json(data["center"]),
            n=int(data["n"]),
            commute_constraints=[from_json(g) for g in data["commute_constraints"]],
            exclusions=[from_json(e) for e in data.get("exclusions", [])],
            trace=[TraceStep(t["x"], t["branch"], tuple(t["F_before"]), tuple(t["F_after"]))
                   for t in data.get("trace", [])],
        )


def in_neighborhood(w: NeighborhoodWitness, h: FiniteRelation) -> bool:
    """Membership in the open set ``O`` denoted by ``w``."""
    if any(commutes(h, g) for g in w.commute_constraints):
        return False
    return h not in w.exclusions


def witness_points(w: NeighborhoodWitness) -> tuple[int, ...]:
    pts = set(w.center.support)
    for g in w.commute_constraints:
        pts |= g.support_set
    for e in w.exclusions:
        pts |= e.support_set
    return point_set(pts)


def lemma1_family(family: Family, f: FiniteRelation, x: int, F: Iterable[int], n: int,
                  fresh: FreshPoints, search_window: Iterable[int] | None = None) -> list[FiniteRelation]:
    """Elements failing to commute with ``f``, localized at ``x``.

    Returns ``[s]`` for the first ``s`` in ``S({x})`` with ``fs != sf`` when
    one exists.  Otherwise returns ``n + 1`` elements ``g_j``, each avoiding
    ``F`` and the earlier ones away from ``x``, with ``supp(g_j)`` not inside
    ``{x}`` and ``f g_j != g_j f``.
    """
    F = point_set(F)
    if x not in f.support_set:
        raise ValueError(f"point {x} is not in the support of the center")
    if x in F:
        raise ValueError(f"point {x} must not lie in F")
    if not family.contains(f):
        raise ValueError(f"center {f!r} is not in {family.name}")
    if not family.witness_capable and search_window is None:
        raise ValueError(f"{family.name} needs a search window")

    for s in family.enumerate_window((x,)):
        if not commutes(f, s):
            return [s]

    fresh.observe(F, f.support)
    current = set(F)
    out: list[FiniteRelation] = []
    for _ in range(n + 1):
        if family.witness_capable:
            g = family.prop2_witness_raw(x, current, fresh)
        else:
            g = _search(family, f, x, current, point_set(search_window))
        if not family.contains(g):
            raise WitnessError(f"witness {g!r} is not in {family.name}")
        if commutes(f, g):
            raise WitnessError(f"witness {g!r} commutes with {f!r}")
        if not g.support_set.isdisjoint(current):
            raise WitnessError(f"witness {g!r} meets the avoided set")
        if g.support_set <= {x}:
            raise WitnessError(f"witness {g!r} is supported inside {{{x}}}")
        out.append(g)
        current |= g.support_set - {x}
        fresh.observe(g.support)

    for i, g in enumerate(out):
        for h in out[i + 1:]:
            assert g.support_set & h.support_set <= {x}
    return out


def _search(family, f, x, avoid, search_window):
    pool = [p for p in search_window if p not in avoid]
    for g in family.enumerate_window(pool):
        if not g.support_set <= {x} and not commutes(f, g):
            return g
    raise SearchExhaustedError(
        f"no element of {family.name} over {pool} fails to commute with {f!r} away from {x}")


def lemma2_neighborhood(family: Family, f: FiniteRelation, n: int, fresh: FreshPoints,
                        search_window: Iterable[int] | None = None) -> NeighborhoodWitness:
    """Neighborhood ``O_f`` with ``supp(f) <= supp(h)`` for every ``h`` in ``O_f`` with ``|supp(h)| <= n``."""
    if n < 0:
        raise ValueError("n must be non-negative")
    if not family.contains(f):
        raise ValueError(f"center {f!r} is not in {family.name}")
    fresh.observe(f.support)
    prev = f.support_set
    constraints: list[FiniteRelation] = []
    trace = []
    for x in f.support:
        fam_i = lemma1_family(family, f, x, prev - {x}, n, fresh, search_window)
        branch = "A" if all(g.support_set <= {x} for g in fam_i) else "B"
        after = set(prev)
        for g in fam_i:
            after |= g.support_set
        trace.append(TraceStep(x, branch, point_set(prev), point_set(after)))
        constraints.extend(fam_i)
        prev = frozenset(after)
    w = NeighborhoodWitness(f, n, constraints, [], trace)
    _check_center(w)
    return w


def isolation_witness(family: Family, f: FiniteRelation, fresh: FreshPoints,
                      search_window: Iterable[int] | None = None) -> NeighborhoodWitness:
    """Neighborhood of ``f`` meeting ``S_{=n}`` only in ``f``, where ``n = |supp(f)|``."""
    n = len(f.support)
    w = lemma2_neighborhood(family, f, n, fresh, search_window)
    same = WindowedSubset(family, f.support, "supp_eq", n)
    w.exclusions = [e for e in enumerate_filtered(same) if e != f]
    _check_center(w)
    return w


def _check_center(w: NeighborhoodWitness) -> None:
    for g in w.commute_constraints:
        if commutes(w.center, g):
            raise WitnessError(f"center commutes with constraint {g!r}")
    if w.center in w.exclusions:
        raise WitnessError("center is excluded from its own neighborhood")


@dataclass
class NeighborhoodReport:
    window: tuple[int, ...]
    enumerated: int
    in_o: int
    asserted: int
    center_in_o: bool
    members: list[FiniteRelation]
    counterexamples: list[FiniteRelation]

    @property
    def verdict(self) -> str:
        return "pass" if self.center_in_o and not self.counterexamples else "fail"

    def to_json(self, summary: bool = False) -> dict:
        out = {"verdict": self.verdict, "window": list(self.window),
               "enumerated": self.enumerated, "in_O": self.in_o, "asserted": self.asserted,
               "center_in_O": self.center_in_o,
               "counterexamples": [to_json(h) for h in self.counterexamples]}
        if not summary:
            out["members"] = [to_json(h) for h in self.members]
        return out


def verify_neighborhood(family: Family, w: NeighborhoodWitness, window: Iterable[int],
                        cap_override: bool = False) -> NeighborhoodReport:
    """Check ``supp(center) <= supp(h)`` for every ``h`` in ``O`` with ``|supp(h)| <= n``.

    The window is extended by every point the witness mentions.
    """
    window = point_set(window)
    if not w.center.support_set <= set(window):
        raise ValueError("the center must be supported inside the window")
    ext = point_set(set(window) | set(witness_points(w)))
    enumerated = 0
    members, bad = [], []
    for h in enumerate_filtered(WindowedSubset(family, ext, "supp_le", w.n), cap_override):
        enumerated += 1
        if in_neighborhood(w, h):
            members.append(h)
            if not w.center.support_set <= h.support_set:
                bad.append(h)
    return NeighborhoodReport(ext, enumerated, len(members), len(members),
                              in_neighborhood(w, w.center), members, bad)


@dataclass
class ItemReport:
    checked: int = 0
    failures: list[dict] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        return "fail" if self.failures else "pass"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "checked": self.checked, "failures": self.failures}


@dataclass
class TheoremMainReport:
    n: int
    window: tuple[int, ...]
    closed: ItemReport
    open: ItemReport
    discrete: ItemReport
    witnesses: list[NeighborhoodWitness] = field(default_factory=list)

    @property
    def verdict(self) -> str:
        items = (self.closed, self.open, self.discrete)
        return "pass" if all(i.verdict == "pass" for i in items) else "fail"

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "n": self.n, "window": list(self.window),
                "closed": self.closed.to_json(), "open": self.open.to_json(),
                "discrete": self.discrete.to_json()}


def verify_theorem_main(family: Family, n: int, window: Iterable[int],
                        fresh: FreshPoints | None = None,
                        cap_override: bool = False) -> TheoremMainReport:
    """Audit closedness of ``S_{<=n}``, relative openness of ``{x in supp}``, discreteness of ``S_{=n}``.

    Each center gets its own copy of ``fresh`` so witnesses do not depend on
    enumeration order.
    """
    window = point_set(window)
    if not family.witness_capable:
        raise ValueError(f"{family.name} cannot construct witnesses")
    if fresh is None:
        fresh = FreshPoints(max(window, default=-1) + 1)
    rep = TheoremMainReport(n, window, ItemReport(), ItemReport(), ItemReport())

    def members(w, kind, bound):
        ext = point_set(set(window) | set(witness_points(w)))
        sub = WindowedSubset(family, ext, kind, bound)
        return [h for h in enumerate_filtered(sub, cap_override) if in_neighborhood(w, h)]

    def fail(item, f, **info):
        item.failures.append({"f": to_json(f), **info})

    for f in family.enumerate_window(window, cap_override):
        size = len(f.support)
        if size > n:
            rep.closed.checked += 1
            try:
                w = lemma2_neighborhood(family, f, n, fresh.copy())
            except WitnessError as exc:
                fail(rep.closed, f, error=str(exc))
                continue
            rep.witnesses.append(w)
            hits = members(w, "supp_le", n)
            if hits:
                fail(rep.closed, f, hits=[to_json(h) for h in hits])
            continue

        try:
            w = lemma2_neighborhood(family, f, n, fresh.copy())
        except WitnessError as exc:
            fail(rep.open, f, error=str(exc))
            continue
        rep.witnesses.append(w)
        hits = members(w, "supp_le", n)
        for x in f.support:
            rep.open.checked += 1
            stray = [h for h in hits if x not in h.support_set]
            if stray:
                fail(rep.open, f, x=x, hits=[to_json(h) for h in stray])

        if size == n:
            rep.discrete.checked += 1
            try:
                iso = isolation_witness(family, f, fresh.copy())
            except WitnessError as exc:
                fail(rep.discrete, f, error=str(exc))
                continue
            rep.witnesses.append(iso)
            hits = members(iso, "supp_eq", n)
            if hits != [f]:
                fail(rep.discrete, f, hits=[to_json(h) for h in hits])
    return rep
