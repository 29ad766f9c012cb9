"""Finitely supported binary relations on the ground set {0, 1, 2, ...}.

A relation is stored in canonical form: ``support`` is the exact set of
points ``x`` with ``f(x) != {x}`` or ``f^-1(x) != {x}``, and ``pairs`` lists
the graph restricted to ``support x support``.  Outside the support the
relation is the identity.  Equality is structural.

Composition follows ``f * g = {(x, z) : (x, y) in f, (y, z) in g}``, i.e.
``compose(f, g)`` applied to ``x`` steps through ``f`` first.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Iterator, Sequence

__all__ = [
    "FiniteRelation",
    "IDENTITY",
    "RelationError",
    "WindowCapError",
    "WINDOW_CAP",
    "apply",
    "apply_set",
    "canonicalize",
    "commutes",
    "compose",
    "compose_naive",
    "enumerate_rel",
    "format_cycles",
    "format_relation",
    "from_json",
    "inverse",
    "is_function",
    "is_permutation",
    "parse_relation",
    "perm",
    "point_set",
    "support",
    "to_json",
    "window_code",
]

#: Largest window for which the full ``Rel(F)`` is enumerated without override.
WINDOW_CAP = 5


class RelationError(ValueError):
    """Malformed relation input."""


class WindowCapError(ValueError):
    """A window enumeration would exceed the configured size cap."""


def point_set(points: Iterable[int]) -> tuple[int, ...]:
    """Normalize an iterable of points to a sorted duplicate-free tuple."""
    out = tuple(sorted(set(points)))
    for p in out:
        if isinstance(p, bool) or not isinstance(p, int) or p < 0:
            raise RelationError(f"not a point of the ground set: {p!r}")
    return out


@dataclass(frozen=True)
class FiniteRelation:
    """A finitely supported relation in canonical (support-minimal) form.

    Build values with :func:`canonicalize`, :func:`perm` or
    :func:`parse_relation`; the constructor only accepts data that is
    already canonical.
    """

    support: tuple[int, ...] = ()
    pairs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        sup = tuple(self.support)
        prs = tuple(sorted({(int(p), int(q)) for p, q in self.pairs}))
        if point_set(sup) != sup:
            raise RelationError("support must be sorted, duplicate-free points")
        object.__setattr__(self, "support", sup)
        object.__setattr__(self, "pairs", prs)
        sset = set(sup)
        for p, q in prs:
            if p not in sset or q not in sset:
                raise RelationError(f"pair {(p, q)} lies outside the support {list(sup)}")
        rows, cols = self._rows, self._cols
        for p in sup:
            if rows.get(p, ()) == (p,) and cols.get(p, ()) == (p,):
                raise RelationError(f"point {p} acts as the identity; relation is not canonical")

    @cached_property
    def _rows(self) -> dict[int, tuple[int, ...]]:
        rows: dict[int, list[int]] = {p: [] for p in self.support}
        for p, q in self.pairs:
            rows[p].append(q)
        return {p: tuple(v) for p, v in rows.items()}

    @cached_property
    def _cols(self) -> dict[int, tuple[int, ...]]:
        cols: dict[int, list[int]] = {p: [] for p in self.support}
        for p, q in self.pairs:
            cols[q].append(p)
        return {p: tuple(sorted(v)) for p, v in cols.items()}

    @cached_property
    def support_set(self) -> frozenset[int]:
        return frozenset(self.support)

    def row(self, x: int) -> tuple[int, ...]:
        return self._rows.get(x, (x,))

    def col(self, x: int) -> tuple[int, ...]:
        return self._cols.get(x, (x,))

    def __repr__(self):
        if is_permutation(self):
            return f"perm({format_cycles(self)!r})"
        return f"FiniteRelation(support={list(self.support)}, pairs={[list(p) for p in self.pairs]})"

    def __str__(self):
        return format_relation(self)


def _trusted(support: tuple[int, ...], pairs: tuple[tuple[int, int], ...]) -> FiniteRelation:
    # skips validation; callers guarantee canonical, sorted input
    rel = object.__new__(FiniteRelation)
    object.__setattr__(rel, "support", support)
    object.__setattr__(rel, "pairs", pairs)
    return rel


IDENTITY = FiniteRelation()


def canonicalize(declared_support: Iterable[int], pairs: Iterable[tuple[int, int]]) -> FiniteRelation:
    """Return the canonical relation ``pairs + {(x, x) : x not in declared_support}``.

    Points of ``declared_support`` whose row and column are both ``{x}`` are
    dropped.  Pairs mentioning a point outside ``declared_support`` are
    rejected.
    """
    dom = point_set(declared_support)
    dset = set(dom)
    prs = set()
    for pair in pairs:
        p, q = pair
        if p not in dset or q not in dset:
            raise RelationError(f"pair {(p, q)} lies outside the declared support {list(dom)}")
        prs.add((p, q))
    rows: dict[int, set[int]] = {p: set() for p in dom}
    cols: dict[int, set[int]] = {p: set() for p in dom}
    for p, q in prs:
        rows[p].add(q)
        cols[q].add(p)
    keep = tuple(p for p in dom if rows[p] != {p} or cols[p] != {p})
    kset = set(keep)
    # a dropped point only ever carries its diagonal pair
    kept_pairs = tuple(sorted((p, q) for p, q in prs if p in kset))
    return _trusted(keep, kept_pairs)


def support(f: FiniteRelation) -> tuple[int, ...]:
    return f.support


def apply(f: FiniteRelation, x: int) -> tuple[int, ...]:
    """Image ``f(x)`` as a sorted tuple."""
    return f.row(x)


def apply_set(f: FiniteRelation, points: Iterable[int]) -> tuple[int, ...]:
    out: set[int] = set()
    for a in points:
        out.update(f.row(a))
    return tuple(sorted(out))


def inverse(f: FiniteRelation) -> FiniteRelation:
    return _trusted(f.support, tuple(sorted((q, p) for p, q in f.pairs)))


# -- boolean matrix kernel ---------------------------------------------------

def _masks(f: FiniteRelation, index: dict[int, int]) -> list[int]:
    """Row bitmasks of ``f`` over the window ``index`` (point -> bit)."""
    rows = f._rows
    out = []
    for p, i in index.items():
        r = rows.get(p)
        if r is None:
            out.append(1 << i)
        else:
            m = 0
            for q in r:
                m |= 1 << index[q]
            out.append(m)
    return out


def _from_masks(window: Sequence[int], masks: Sequence[int]) -> FiniteRelation:
    """Canonical relation from row bitmasks over ``window``."""
    k = len(window)
    cols = [0] * k
    for i, m in enumerate(masks):
        while m:
            low = m & -m
            cols[low.bit_length() - 1] |= 1 << i
            m ^= low
    keep = [i for i in range(k) if masks[i] != 1 << i or cols[i] != 1 << i]
    pairs = []
    for i in keep:
        m = masks[i]
        while m:
            low = m & -m
            pairs.append((window[i], window[low.bit_length() - 1]))
            m ^= low
    return _trusted(tuple(window[i] for i in keep), tuple(pairs))


def compose(f: FiniteRelation, g: FiniteRelation) -> FiniteRelation:
    """Relational product: first ``f``, then ``g``."""
    if not f.support:
        return g
    if not g.support:
        return f
    window = sorted(f.support_set | g.support_set)
    index = {p: i for i, p in enumerate(window)}
    mf = _masks(f, index)
    mg = _masks(g, index)
    out = []
    for m in mf:
        acc = 0
        while m:
            low = m & -m
            acc |= mg[low.bit_length() - 1]
            m ^= low
        out.append(acc)
    return _from_masks(window, out)


def compose_naive(f: FiniteRelation, g: FiniteRelation) -> FiniteRelation:
    """Reference composition over explicit pair sets (test oracle for :func:`compose`)."""
    window = set(f.support) | set(g.support)
    ext_f = set(f.pairs) | {(x, x) for x in window - set(f.support)}
    ext_g = set(g.pairs) | {(x, x) for x in window - set(g.support)}
    prod = {(x, z) for (x, y) in ext_f for (y2, z) in ext_g if y == y2}
    return canonicalize(window, prod)


def commutes(f: FiniteRelation, g: FiniteRelation, fast: bool = True) -> bool:
    """True iff ``compose(f, g) == compose(g, f)``.

    With ``fast`` set, disjointly supported pairs return True without
    composing.
    """
    if f == g:
        return True
    if fast and f.support_set.isdisjoint(g.support_set):
        return True
    return compose(f, g) == compose(g, f)


def is_function(f: FiniteRelation) -> bool:
    rows = f._rows
    return all(len(rows[p]) == 1 for p in f.support)


def is_permutation(f: FiniteRelation) -> bool:
    rows, cols = f._rows, f._cols
    return all(len(rows[p]) == 1 and len(cols[p]) == 1 for p in f.support)


# -- enumeration -------------------------------------------------------------

def window_code(f: FiniteRelation, window: Sequence[int]) -> int:
    """Position of ``f`` in the enumeration of ``Rel(window)``.

    Pair ``(window[i], window[j])`` is bit ``i * k + j``; ``f`` must be
    supported inside ``window``.
    """
    window = point_set(window)
    index = {p: i for i, p in enumerate(window)}
    if not f.support_set <= index.keys():
        raise ValueError("relation is not supported inside the window")
    k = len(window)
    code = 0
    for i, m in enumerate(_masks(f, index)):
        code |= m << (i * k)
    return code


def enumerate_rel(window: Iterable[int], cap_override: bool = False) -> Iterator[FiniteRelation]:
    """All canonical relations supported inside ``window``, in code order.

    There are exactly ``2 ** (k * k)`` of them for a window of ``k`` points.
    """
    window = point_set(window)
    k = len(window)
    if k > WINDOW_CAP and not cap_override:
        raise WindowCapError(f"Rel(F) for |F| = {k} exceeds the cap {WINDOW_CAP}")
    row_mask = (1 << k) - 1
    for code in range(1 << (k * k)):
        yield _from_masks(window, [(code >> (i * k)) & row_mask for i in range(k)])


# -- text formats ------------------------------------------------------------

def perm(cycles: str) -> FiniteRelation:
    """Permutation from disjoint-cycle notation, e.g. ``perm("(0 1)(2 3 4)")``."""
    text = cycles.strip()
    found = re.findall(r"\(([^()]*)\)", text)
    if re.sub(r"\(([^()]*)\)", "", text).strip():
        raise RelationError(f"malformed cycle notation: {cycles!r}")
    image: dict[int, int] = {}
    for body in found:
        try:
            pts = [int(tok) for tok in body.split()]
        except ValueError:
            raise RelationError(f"malformed cycle: ({body})") from None
        for p in pts:
            if p < 0:
                raise RelationError(f"negative point {p}")
            if p in image:
                raise RelationError(f"point {p} appears in two cycles")
        for a, b in zip(pts, pts[1:] + pts[:1]):
            image[a] = b
    return canonicalize(image, image.items())


def format_cycles(f: FiniteRelation) -> str:
    if not is_permutation(f):
        raise ValueError("relation is not a permutation")
    image = {p: f.row(p)[0] for p in f.support}
    seen: set[int] = set()
    parts = []
    for start in f.support:
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        nxt = image[start]
        while nxt != start:
            cyc.append(nxt)
            seen.add(nxt)
            nxt = image[nxt]
        parts.append("(" + " ".join(map(str, cyc)) + ")")
    return "".join(parts) or "()"


def to_json(f: FiniteRelation) -> dict:
    return {"support": list(f.support), "pairs": [list(p) for p in f.pairs]}


def from_json(data) -> FiniteRelation:
    if not isinstance(data, dict) or set(data) != {"support", "pairs"}:
        raise RelationError("relation JSON must be an object with keys 'support' and 'pairs'")
    sup, prs = data["support"], data["pairs"]
    if not isinstance(sup, list) or not isinstance(prs, list):
        raise RelationError("'support' and 'pairs' must be lists")
    pairs = []
    for pr in prs:
        if not isinstance(pr, list) or len(pr) != 2:
            raise RelationError(f"malformed pair: {pr!r}")
        pairs.append(tuple(point_set([pr[0]]) + point_set([pr[1]])))
    return canonicalize(sup, pairs)


def parse_relation(text: str) -> FiniteRelation:
    """Parse relation JSON or the ``perm:(0 1)(2 3)`` shorthand."""
    text = text.strip()
    if text.startswith("perm:"):
        return perm(text[len("perm:"):])
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise RelationError(f"malformed relation JSON: {exc}") from None
    return from_json(data)


def format_relation(f: FiniteRelation) -> str:
    return json.dumps(to_json(f), separators=(",", ":"))
