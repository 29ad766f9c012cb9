"""Centralizers over finite windows and the double-centralizer exclusion audit."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .families import Family, FreshPoints
from .relation import FiniteRelation, apply, commutes, point_set, to_json

__all__ = [
    "CentralizerQuery",
    "FdcEntry",
    "FdcReport",
    "centralizer_window",
    "double_centralizer_window",
    "fdc_audit",
]


@dataclass(frozen=True)
class CentralizerQuery:
    family: Family
    window: tuple[int, ...]
    targets: tuple[FiniteRelation, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "window", point_set(self.window))
        object.__setattr__(self, "targets", tuple(self.targets))
        for t in self.targets:
            if not self.family.contains(t):
                raise ValueError(f"target {t!r} is not in {self.family.name}")


def centralizer_window(q: CentralizerQuery, cap_override: bool = False) -> list[FiniteRelation]:
    """Window elements commuting with every target (all of them when there are none)."""
    return [g for g in q.family.enumerate_window(q.window, cap_override)
            if all(commutes(g, t) for t in q.targets)]


def double_centralizer_window(q: CentralizerQuery, cap_override: bool = False) -> list[FiniteRelation]:
    """Window approximation of ``Cent(Cent(T))``.

    Only elements of the window are tested against the window centralizer, so
    the result over-approximates the true double centralizer; use
    :func:`fdc_audit` for certified exclusions.
    """
    inner = centralizer_window(q, cap_override)
    return [h for h in q.family.enumerate_window(q.window, cap_override)
            if all(commutes(h, c) for c in inner)]


@dataclass
class FdcEntry:
    g: FiniteRelation
    h: FiniteRelation | None
    commutes: bool
    error: str | None = None

    def to_json(self) -> dict:
        out = {"g": to_json(self.g), "h": to_json(self.h) if self.h is not None else None,
               "commutes": self.commutes}
        if self.error:
            out["error"] = self.error
        return out


@dataclass
class FdcReport:
    verdict: str
    checked: int
    entries: list[FdcEntry] = field(default_factory=list)

    @property
    def failures(self) -> list[FdcEntry]:
        return [e for e in self.entries if e.commutes or e.error]

    def to_json(self, summary: bool = False) -> dict:
        out = {"verdict": self.verdict, "checked": self.checked}
        if not summary:
            out["entries"] = [e.to_json() for e in self.entries]
        return out


def _fdc_witness(family: Family, g: FiniteRelation, core: frozenset, start: int):
    x = min(p for p in g.support if p not in core)
    avoid = core | (g.support_set - {x})
    h = family.prop2_witness_raw(x, avoid, FreshPoints(start))
    problems = []
    if not family.contains(h):
        problems.append("witness not in family")
    if not h.support_set.isdisjoint(core):
        problems.append("witness support meets the targets' support")
    gx = apply(h, x)
    if x in gx or not gx:
        problems.append("witness violates x not in h(x) != {}")
    return h, "; ".join(problems) or None


def fdc_audit(family: Family, targets: Sequence[FiniteRelation], window,
              cap_override: bool = False) -> FdcReport:
    """Certify ``g not in Cent(Cent(T))`` for every window ``g`` escaping ``S(F)``.

    ``F`` is the union of the target supports.  For each such ``g`` an element
    ``h`` with support disjoint from ``F`` (so ``h`` centralizes ``T``) is
    built and checked by direct composition not to commute with ``g``.
    """
    window = point_set(window)
    if not family.witness_capable:
        raise ValueError(f"{family.name} cannot construct witnesses")
    core: set[int] = set()
    for t in targets:
        if not family.contains(t):
            raise ValueError(f"target {t!r} is not in {family.name}")
        core |= t.support_set
    if not core <= set(window):
        raise ValueError("target supports must lie inside the window")
    core = frozenset(core)
    start = max(window, default=-1) + 1
    entries = []
    checked = 0
    for g in family.enumerate_window(window, cap_override):
        if g.support_set <= core:
            continue
        checked += 1
        h, problem = _fdc_witness(family, g, core, start)
        entries.append(FdcEntry(g, h, commutes(h, g, fast=False), problem))
    verdict = "fail" if any(e.commutes or e.error for e in entries) else "pass"
    return FdcReport(verdict, checked, entries)
