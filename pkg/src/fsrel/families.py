"""Semigroup families ``S`` with ``FSym(X) <= S <= FRel(X)``, and generated closures.

Every family answers membership, enumerates its elements supported inside a
finite window, and (for the built-in ones) produces a witness ``g`` avoiding a
finite set ``E`` with ``x not in g(x) != {}``.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import deque
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator, Sequence

from .relation import (
    WINDOW_CAP,
    FiniteRelation,
    WindowCapError,
    canonicalize,
    compose,
    enumerate_rel,
    from_json,
    is_function,
    is_permutation,
    point_set,
    window_code,
)

__all__ = [
    "ClosureCapError",
    "Family",
    "FreshPoints",
    "GeneratedFamily",
    "WindowedSubset",
    "enumerate_filtered",
    "family_from_spec",
    "ffun_family",
    "frel_family",
    "fsym_family",
    "generated_family",
    "transposition",
]


class ClosureCapError(RuntimeError):
    """Generated closure grew past its element cap."""


class FreshPoints:
    """Deterministic allocator of ground-set points not mentioned so far.

    ``take()`` returns the smallest integer exceeding every point passed to
    ``observe`` and every point previously taken.
    """

    def __init__(self, start: int = 0):
        self._next = start

    def observe(self, *groups: Iterable[int]) -> None:
        for group in groups:
            for p in group:
                if p >= self._next:
                    self._next = p + 1

    def take(self) -> int:
        p = self._next
        self._next += 1
        return p

    @property
    def next(self) -> int:
        return self._next

    def copy(self) -> "FreshPoints":
        return FreshPoints(self._next)

    def __repr__(self):
        return f"FreshPoints(next={self._next})"


def transposition(x: int, y: int) -> FiniteRelation:
    if x == y:
        raise ValueError("a transposition needs two distinct points")
    return canonicalize((x, y), ((x, y), (y, x)))


class Family:
    """Abstract subsemigroup of ``FRel(X)``.

    Subclasses implement ``contains`` and ``_exact_support``; the latter
    yields the elements whose support is exactly the given point set.
    """

    name = "family"
    witness_capable = False
    window_cap = WINDOW_CAP

    def contains(self, f: FiniteRelation) -> bool:
        raise NotImplementedError

    def _exact_support(self, points: tuple[int, ...]) -> Iterable[FiniteRelation]:
        raise NotImplementedError

    def _check_cap(self, size: int, cap_override: bool) -> None:
        if size > self.window_cap and not cap_override:
            raise WindowCapError(
                f"{self.name}: enumerating a {size}-point window exceeds the cap {self.window_cap}"
            )

    def _collect(self, window, sizes, must_contain=None) -> list[FiniteRelation]:
        out = []
        for k in sizes:
            for sub in itertools.combinations(window, k):
                if must_contain is not None and must_contain not in sub:
                    continue
                out.extend(self._exact_support(sub))
        out.sort(key=lambda f: window_code(f, window))
        return out

    def enumerate_window(self, window: Iterable[int], cap_override: bool = False) -> Iterator[FiniteRelation]:
        """Elements supported inside ``window``, each once, in window-code order."""
        window = point_set(window)
        self._check_cap(len(window), cap_override)
        return iter(self._collect(window, range(len(window) + 1)))

    def prop2_witness_raw(self, x: int, avoid: Iterable[int], fresh: FreshPoints) -> FiniteRelation:
        """An element ``g`` with ``supp(g)`` disjoint from ``avoid`` and ``x not in g(x) != {}``."""
        raise NotImplementedError(f"{self.name} has no constructive witness")

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


class _TranspositionWitness:
    witness_capable = True

    def prop2_witness_raw(self, x, avoid, fresh):
        avoid = point_set(avoid)
        if x in avoid:
            raise ValueError(f"point {x} lies in the avoided set")
        fresh.observe(avoid, (x,))
        return transposition(x, fresh.take())


class FRelFamily(_TranspositionWitness, Family):
    name = "frel"

    def contains(self, f):
        return isinstance(f, FiniteRelation)

    def _exact_support(self, points):
        if len(points) > self.window_cap:
            raise WindowCapError(f"frel: support of size {len(points)} exceeds the cap")
        return (f for f in enumerate_rel(points) if len(f.support) == len(points))

    def enumerate_window(self, window, cap_override=False):
        window = point_set(window)
        self._check_cap(len(window), cap_override)
        # distinct subsets of F x F extend to distinct relations, so no dedup is needed
        return enumerate_rel(window, cap_override=True)


class FSymFamily(_TranspositionWitness, Family):
    name = "fsym"
    window_cap = 8

    def contains(self, f):
        return is_permutation(f)

    def _exact_support(self, points):
        for image in itertools.permutations(points):
            if all(p != q for p, q in zip(points, image)):
                yield canonicalize(points, zip(points, image))


class FFunFamily(_TranspositionWitness, Family):
    name = "ffun"
    window_cap = 6

    def contains(self, f):
        return is_function(f)

    def _exact_support(self, points):
        for image in itertools.product(points, repeat=len(points)):
            f = canonicalize(points, zip(points, image))
            if len(f.support) == len(points):
                yield f

    def enumerate_window(self, window, cap_override=False):
        window = point_set(window)
        self._check_cap(len(window), cap_override)
        # a total map supported in F sends F into F (an image point outside F
        # would have a non-trivial column), so maps F -> F are all of S(F)
        out = [canonicalize(window, zip(window, image))
               for image in itertools.product(window, repeat=len(window))]
        out.sort(key=lambda f: window_code(f, window))
        return iter(out)


class GeneratedFamily(Family):
    """Closure of a finite generating set under composition (no adjoined identity)."""

    witness_capable = False
    name = "gen"

    def __init__(self, generators: Sequence[FiniteRelation], cap: int = 10**6, name: str = "gen"):
        if not generators:
            raise ValueError("generated_family needs at least one generator")
        self.generators = tuple(dict.fromkeys(generators))
        self.name = name
        self.elements = self._closure(cap)
        self._members = frozenset(self.elements)

    def _closure(self, cap):
        seen = {}
        todo = deque()
        for g in self.generators:
            if g not in seen:
                seen[g] = None
                todo.append(g)
        while todo:
            s = todo.popleft()
            for g in self.generators:
                t = compose(s, g)
                if t not in seen:
                    if len(seen) >= cap:
                        raise ClosureCapError(f"closure exceeds {cap} elements")
                    seen[t] = None
                    todo.append(t)
        return tuple(seen)

    def contains(self, f):
        return f in self._members

    def _exact_support(self, points):
        return (f for f in self.elements if f.support == points)

    def enumerate_window(self, window, cap_override=False):
        window = point_set(window)
        wset = set(window)
        out = [f for f in self.elements if f.support_set <= wset]
        out.sort(key=lambda f: window_code(f, window))
        return iter(out)

    def __len__(self):
        return len(self.elements)


_FREL, _FSYM, _FFUN = FRelFamily(), FSymFamily(), FFunFamily()


def frel_family() -> Family:
    return _FREL


def fsym_family() -> Family:
    return _FSYM


def ffun_family() -> Family:
    return _FFUN


def generated_family(generators: Sequence[FiniteRelation], cap: int = 10**6) -> GeneratedFamily:
    return GeneratedFamily(generators, cap=cap)


def family_from_spec(spec: str) -> Family:
    """Resolve ``frel``, ``fsym``, ``ffun`` or ``gen:<path to JSON list>``."""
    builtin = {"frel": _FREL, "fsym": _FSYM, "ffun": _FFUN}
    if spec in builtin:
        return builtin[spec]
    if spec.startswith("gen:"):
        path = Path(spec[4:])
        data = json.loads(path.read_text())
        if not isinstance(data, list):
            raise ValueError(f"{path}: expected a JSON list of relations")
        fam = GeneratedFamily([from_json(item) for item in data], name=spec)
        return fam
    raise ValueError(f"unknown family spec {spec!r}")


@dataclass(frozen=True)
class WindowedSubset:
    """``{f in S : supp(f) <= window}`` narrowed by a support filter.

    ``kind`` is ``"all"``, ``"supp_le"``, ``"supp_eq"`` or ``"supp_contains"``;
    ``value`` is the bound ``n`` or the point ``x``.
    """

    family: Family
    window: tuple[int, ...]
    kind: str = "all"
    value: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "window", point_set(self.window))
        if self.kind not in ("all", "supp_le", "supp_eq", "supp_contains"):
            raise ValueError(f"unknown filter {self.kind!r}")
        if self.kind != "all" and self.value is None:
            raise ValueError(f"filter {self.kind} needs a value")

    def accepts(self, f: FiniteRelation) -> bool:
        if self.kind == "supp_le":
            return len(f.support) <= self.value
        if self.kind == "supp_eq":
            return len(f.support) == self.value
        if self.kind == "supp_contains":
            return self.value in f.support_set
        return True


def enumerate_filtered(w: WindowedSubset, cap_override: bool = False) -> Iterator[FiniteRelation]:
    """Window enumeration restricted by the filter, in window-code order.

    Support-size filters only enumerate subsets of the bounded size, so the
    cap applies to the largest support actually enumerated.
    """
    fam, window = w.family, w.window
    if w.kind in ("all", "supp_contains"):
        return (f for f in fam.enumerate_window(window, cap_override) if w.accepts(f))
    k = len(window)
    n = w.value
    if n < 0:
        return iter(())
    sizes = range(min(n, k) + 1) if w.kind == "supp_le" else ([n] if n <= k else [])
    if isinstance(fam, GeneratedFamily):
        return (f for f in fam.enumerate_window(window) if w.accepts(f))
    fam._check_cap(max(sizes, default=0), cap_override)
    return iter(fam._collect(window, sizes))


def expected_window_size(family: Family, k: int) -> int:
    """Closed-form ``|S(F)|`` for a ``k``-point window of a built-in family."""
    if family is _FREL:
        return 2 ** (k * k)
    if family is _FSYM:
        return math.factorial(k)
    if family is _FFUN:
        return k ** k
    raise ValueError(f"no closed-form window size for {family.name}")

