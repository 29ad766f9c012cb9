"""Named verification suites with machine-readable reports."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

from .centralizer import fdc_audit
from .families import Family, FreshPoints, expected_window_size, family_from_spec
from .relation import (
    FiniteRelation,
    apply,
    commutes,
    compose,
    compose_naive,
    point_set,
    to_json,
)
from .zariski import WitnessError, verify_theorem_main

__all__ = ["SUITES", "AuditReport", "AuditSpec", "run_audit"]

SUITES = ("axioms", "counting", "associativity", "oracle", "prop2", "fdc", "theorem_main")


@dataclass(frozen=True)
class AuditSpec:
    suite: str
    family: str
    window: tuple[int, ...]
    n: int | None = None
    seed: int | None = None
    samples: int | None = None
    targets: tuple[FiniteRelation, ...] = ()
    failure_cap: int = 32
    cap_override: bool = False

    def __post_init__(self):
        if self.suite not in SUITES:
            raise ValueError(f"unknown suite {self.suite!r}; expected one of {', '.join(SUITES)}")
        object.__setattr__(self, "window", point_set(self.window))
        object.__setattr__(self, "targets", tuple(self.targets))
        if self.suite == "theorem_main" and self.n is None:
            raise ValueError("theorem_main needs n")
        if self.suite == "fdc" and not self.targets:
            raise ValueError("fdc needs at least one target")

    def to_json(self) -> dict:
        out = {"suite": self.suite, "family": self.family, "window": list(self.window)}
        if self.n is not None:
            out["n"] = self.n
        if self.seed is not None:
            out["seed"] = self.seed
        if self.samples is not None:
            out["samples"] = self.samples
        if self.targets:
            out["targets"] = [to_json(t) for t in self.targets]
        return out


@dataclass
class AuditReport:
    spec: AuditSpec
    checked: int = 0
    failures: list[dict] = field(default_factory=list)
    failure_count: int = 0
    wall_time: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "pass" if self.failure_count == 0 else "fail"

    def fail(self, record: dict) -> None:
        self.failure_count += 1
        if len(self.failures) < self.spec.failure_cap:
            self.failures.append(record)

    def to_json(self, summary: bool = False) -> dict:
        out = dict(self.spec.to_json())
        out.update({"verdict": self.verdict, "checked": self.checked,
                    "failure_count": self.failure_count, "failures": self.failures})
        for key, val in self.details.items():
            if summary and key == "entries":
                continue
            out[key] = val
        out["wall_time_ms"] = int(round(self.wall_time * 1000))
        return out


def _elements(fam: Family, spec: AuditSpec) -> list[FiniteRelation]:
    return list(fam.enumerate_window(spec.window, spec.cap_override))


def _counting(fam, spec, rep):
    elems = _elements(fam, spec)
    rep.checked = len(elems)
    expected = expected_window_size(fam, len(spec.window))
    rep.details["expected"] = expected
    if len(elems) != expected:
        rep.fail({"count": len(elems), "expected": expected})
    if len(set(elems)) != len(elems):
        rep.fail({"duplicates": len(elems) - len(set(elems))})
    wset = set(spec.window)
    for f in elems:
        if not fam.contains(f) or not f.support_set <= wset:
            rep.fail({"f": to_json(f), "reason": "not a window element"})


def _axioms(fam, spec, rep):
    elems = _elements(fam, spec)
    wset = set(spec.window)
    for f, g in itertools.product(elems, repeat=2):
        rep.checked += 1
        fg = compose(f, g)
        if not fg.support_set <= f.support_set | g.support_set:
            rep.fail({"f": to_json(f), "g": to_json(g), "reason": "support not subadditive"})
        if not fam.contains(fg) or not fg.support_set <= wset:
            rep.fail({"f": to_json(f), "g": to_json(g), "reason": "product leaves S(F)"})
        if f.support_set.isdisjoint(g.support_set) and fg != compose(g, f):
            rep.fail({"f": to_json(f), "g": to_json(g), "reason": "disjoint supports do not commute"})


def _associativity(fam, spec, rep):
    elems = _elements(fam, spec)
    if spec.samples is None:
        triples = itertools.product(elems, repeat=3)
    else:
        rng = random.Random(spec.seed)
        triples = ((rng.choice(elems), rng.choice(elems), rng.choice(elems))
                   for _ in range(spec.samples))
    for f, g, h in triples:
        rep.checked += 1
        if compose(compose(f, g), h) != compose(f, compose(g, h)):
            rep.fail({"f": to_json(f), "g": to_json(g), "h": to_json(h)})


def _oracle(fam, spec, rep):
    elems = _elements(fam, spec)
    for f, g in itertools.product(elems, repeat=2):
        rep.checked += 1
        if compose(f, g) != compose_naive(f, g):
            rep.fail({"f": to_json(f), "g": to_json(g)})


def _prop2(fam, spec, rep):
    if not fam.witness_capable:
        raise ValueError(f"{fam.name} cannot construct witnesses")
    window = spec.window
    start = max(window, default=-1) + 1
    proper = [frozenset(c) for k in range(len(window))
              for c in itertools.combinations(window, k)]
    for f in _elements(fam, spec):
        for F in proper:
            if f.support_set <= F:
                continue
            rep.checked += 1
            x = min(f.support_set - F)
            avoid = F | (f.support_set - {x})
            record = {"f": to_json(f), "F": sorted(F), "x": x}
            try:
                g = fam.prop2_witness_raw(x, avoid, FreshPoints(start))
            except (ValueError, WitnessError) as exc:
                rep.fail({**record, "reason": str(exc)})
                continue
            gx = apply(g, x)
            problems = []
            if not fam.contains(g):
                problems.append("witness not in family")
            if not g.support_set.isdisjoint(F):
                problems.append("witness support meets F")
            if x in gx or not gx:
                problems.append("x not in g(x) != {} fails")
            if commutes(f, g, fast=False):
                problems.append("witness commutes with f")
            if problems:
                rep.fail({**record, "g": to_json(g), "reason": "; ".join(problems)})


def _fdc(fam, spec, rep):
    res = fdc_audit(fam, spec.targets, spec.window, spec.cap_override)
    rep.checked = res.checked
    for e in res.failures:
        rep.fail(e.to_json())
    rep.details["entries"] = [e.to_json() for e in res.entries]


def _theorem_main(fam, spec, rep):
    res = verify_theorem_main(fam, spec.n, spec.window, cap_override=spec.cap_override)
    for name in ("closed", "open", "discrete"):
        item = getattr(res, name)
        rep.checked += item.checked
        for f in item.failures:
            rep.fail({"item": name, **f})
        rep.details[name] = {"verdict": item.verdict, "checked": item.checked}


_RUNNERS = {
    "axioms": _axioms,
    "counting": _counting,
    "associativity": _associativity,
    "oracle": _oracle,
    "prop2": _prop2,
    "fdc": _fdc,
    "theorem_main": _theorem_main,
}


def run_audit(spec: AuditSpec) -> AuditReport:
    """Run one suite.  Construction failures become failure records."""
    fam = family_from_spec(spec.family)
    rep = AuditReport(spec)
    t0 = time.perf_counter()
    try:
        _RUNNERS[spec.suite](fam, spec, rep)
    except WitnessError as exc:
        rep.fail({"reason": str(exc)})
    rep.wall_time = time.perf_counter() - t0
    return rep
