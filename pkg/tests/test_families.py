import itertools
import json
import math

import pytest

from fsrel.families import (
    ClosureCapError,
    FreshPoints,
    WindowedSubset,
    enumerate_filtered,
    family_from_spec,
    ffun_family,
    frel_family,
    fsym_family,
    generated_family,
    transposition,
)
from fsrel.relation import (
    IDENTITY,
    FiniteRelation,
    WindowCapError,
    apply,
    compose,
    compose_naive,
    enumerate_rel,
    is_function,
    perm,
    window_code,
)

FAMILIES = [frel_family(), fsym_family(), ffun_family()]
EMPTY0 = FiniteRelation(support=(0,))


def brute_closure(gens, max_len=8):
    """All products of 1..max_len generators (enough once the set stops growing)."""
    seen = set()
    for length in range(1, max_len + 1):
        for word in itertools.product(gens, repeat=length):
            acc = word[0]
            for g in word[1:]:
                acc = compose_naive(acc, g)
            seen.add(acc)
    return seen


def test_frel_window_counts():
    frel = frel_family()
    assert [len(list(frel.enumerate_window(range(k)))) for k in (1, 2, 3)] == [2, 16, 512]
    assert list(frel.enumerate_window((0,))) == [EMPTY0, IDENTITY]


@pytest.mark.parametrize("k", [0, 1, 2, 3, 4])
def test_fsym_ffun_counts(k):
    assert len(list(fsym_family().enumerate_window(range(k)))) == math.factorial(k)
    assert len(list(ffun_family().enumerate_window(range(k)))) == k ** k


def test_ffun_window_is_the_functions_in_rel_window():
    for window in [(0, 1), (0, 1, 2), (2, 5, 9)]:
        from_rel = [f for f in enumerate_rel(window) if is_function(f)]
        assert list(ffun_family().enumerate_window(window)) == from_rel


def test_fsym_window_is_the_permutations_in_rel_window():
    window = (1, 2, 4)
    from_rel = [f for f in enumerate_rel(window) if fsym_family().contains(f)]
    assert list(fsym_family().enumerate_window(window)) == from_rel


def test_membership_examples():
    assert fsym_family().contains(perm("(0 1)"))
    assert not fsym_family().contains(EMPTY0)
    assert ffun_family().contains(perm("(0 1)"))
    assert not ffun_family().contains(EMPTY0)
    assert ffun_family().contains(FiniteRelation(support=(0, 1), pairs=((0, 1), (1, 1))))
    assert frel_family().contains(EMPTY0)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_windows_are_ordered_by_code_and_duplicate_free(family):
    window = (0, 2, 3)
    elems = list(family.enumerate_window(window))
    codes = [window_code(f, window) for f in elems]
    assert codes == sorted(set(codes))
    assert all(family.contains(f) and f.support_set <= set(window) for f in elems)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_def1_axioms_and_closure_window3(family):
    elems = list(family.enumerate_window((0, 1, 2)))
    for f, g in itertools.product(elems, repeat=2):
        fg = compose(f, g)
        assert fg.support_set <= f.support_set | g.support_set
        assert family.contains(fg)
        if f.support_set.isdisjoint(g.support_set):
            assert fg == compose(g, f)


def test_inclusions_fsym_ffun_frel():
    for window in [(0,), (0, 1), (0, 1, 2), (0, 1, 2, 3)]:
        for f in fsym_family().enumerate_window(window):
            assert ffun_family().contains(f) and frel_family().contains(f)
        for f in ffun_family().enumerate_window(window):
            assert frel_family().contains(f)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
def test_prop2_witness_contract(family):
    pts = range(5)
    for x in pts:
        rest = [p for p in pts if p != x]
        for r in range(len(rest) + 1):
            for E in itertools.combinations(rest, r):
                g = family.prop2_witness_raw(x, E, FreshPoints(0))
                gx = apply(g, x)
                assert family.contains(g)
                assert g.support_set.isdisjoint(E)
                assert x not in gx and gx


def test_prop2_witness_uses_fresh_point():
    fresh = FreshPoints(3)
    assert fsym_family().prop2_witness_raw(0, (1, 7), fresh) == transposition(0, 8)
    assert fresh.next == 9
    with pytest.raises(ValueError):
        frel_family().prop2_witness_raw(1, (1,), FreshPoints())


def test_fresh_points():
    fresh = FreshPoints(2)
    fresh.observe((0, 1))
    assert fresh.take() == 2
    fresh.observe((10,), (4,))
    assert fresh.take() == 11
    clone = fresh.copy()
    assert clone.take() == fresh.take() == 12


def test_generated_closure_examples():
    assert set(generated_family([perm("(0 1)")]).elements) == {perm("(0 1)"), IDENTITY}
    s3 = generated_family([perm("(0 1)"), perm("(1 2)")])
    assert len(s3) == 6
    assert set(s3.elements) == set(fsym_family().enumerate_window((0, 1, 2)))
    assert compose_naive(EMPTY0, EMPTY0) == EMPTY0
    assert generated_family([EMPTY0]).elements == (EMPTY0,)


@pytest.mark.parametrize("gens", [
    [perm("(0 1)"), perm("(1 2)")],
    [FiniteRelation(support=(0, 1), pairs=((0, 1),)), perm("(1 2)")],
    [FiniteRelation(support=(0, 1), pairs=((0, 0), (0, 1), (1, 0))), EMPTY0],
])
def test_generated_closure_matches_brute_force(gens):
    fam = generated_family(gens)
    assert set(fam.elements) == brute_closure(gens)
    for f, g in itertools.product(fam.elements, repeat=2):
        assert fam.contains(compose(f, g))
    assert not fam.witness_capable


def test_generated_family_window_and_cap():
    s3 = generated_family([perm("(0 1)"), perm("(1 2)")])
    assert list(s3.enumerate_window((0, 1))) == [perm("(0 1)"), IDENTITY]
    with pytest.raises(ClosureCapError):
        generated_family([perm("(0 1 2 3 4)"), perm("(0 1)")], cap=50)
    with pytest.raises(ValueError):
        generated_family([])


def test_enumerate_filtered_examples():
    fsym, frel = fsym_family(), frel_family()
    got = list(enumerate_filtered(WindowedSubset(fsym, (0, 1, 2), "supp_eq", 2)))
    assert set(got) == {perm("(0 1)"), perm("(0 2)"), perm("(1 2)")}
    assert list(enumerate_filtered(WindowedSubset(frel, (0, 1), "supp_le", 0))) == [IDENTITY]
    le2 = list(enumerate_filtered(WindowedSubset(fsym, range(8), "supp_le", 2)))
    assert len(le2) == 1 + math.comb(8, 2)


@pytest.mark.parametrize("family", FAMILIES, ids=lambda f: f.name)
@pytest.mark.parametrize("kind,value", [("supp_le", 1), ("supp_le", 2), ("supp_eq", 2),
                                        ("supp_eq", 0), ("supp_contains", 1), ("all", None),
                                        ("supp_eq", 5)])
def test_filtered_equals_filtering_the_window(family, kind, value):
    ws = WindowedSubset(family, (0, 1, 3), kind, value)
    assert list(enumerate_filtered(ws)) == [f for f in family.enumerate_window(ws.window) if ws.accepts(f)]


def test_filtered_cap_counts_only_enumerated_supports():
    frel = frel_family()
    got = list(enumerate_filtered(WindowedSubset(frel, range(9), "supp_le", 1)))
    assert len(got) == 1 + 9
    with pytest.raises(WindowCapError):
        list(enumerate_filtered(WindowedSubset(frel, range(9), "all")))
    with pytest.raises(WindowCapError):
        frel.enumerate_window(range(6))


def test_family_from_spec(tmp_path):
    assert family_from_spec("fsym") is fsym_family()
    path = tmp_path / "gens.json"
    path.write_text(json.dumps([{"support": [0, 1], "pairs": [[0, 1], [1, 0]]}]))
    fam = family_from_spec(f"gen:{path}")
    assert len(fam) == 2
    with pytest.raises(ValueError):
        family_from_spec("nope")
