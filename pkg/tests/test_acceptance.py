"""Exit criteria.  Each test prints one PASS/FAIL line and enforces its time budget."""

import itertools
import math
import random
import time

import pytest

from fsrel.audit import AuditSpec, run_audit
from fsrel.families import (
    FreshPoints,
    WindowedSubset,
    enumerate_filtered,
    ffun_family,
    frel_family,
    fsym_family,
    generated_family,
)
from fsrel.relation import (
    FiniteRelation,
    apply,
    commutes,
    compose,
    compose_naive,
    enumerate_rel,
    from_json,
    perm,
)
from fsrel.zariski import (
    in_neighborhood,
    isolation_witness,
    lemma2_neighborhood,
    verify_theorem_main,
    witness_points,
)

T01 = perm("(0 1)")
W3 = (0, 1, 2)
REL3 = list(enumerate_rel(W3))


@pytest.fixture
def verdict(capsys):
    def emit(number, ok, detail, elapsed, budget):
        ok = ok and elapsed < budget
        with capsys.disabled():
            print(f"\ncriterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}  "
                  f"({elapsed:.2f}s, budget {budget}s)")
        assert ok, detail
    return emit


def test_c01_counting(verdict):
    t0 = time.perf_counter()
    frel = [len(list(frel_family().enumerate_window(range(k)))) for k in (1, 2, 3)]
    ok = frel == [2, 16, 512]
    for k in (1, 2, 3, 4):
        ok &= len(list(fsym_family().enumerate_window(range(k)))) == math.factorial(k)
        ok &= len(list(ffun_family().enumerate_window(range(k)))) == k ** k
    verdict(1, ok, f"|Rel(F)| = {frel}; FSym = |F|!, FFun = |F|^|F|", time.perf_counter() - t0, 1)


def test_c02_def1_axioms(verdict):
    t0 = time.perf_counter()
    bad_sub = bad_comm = disjoint = 0
    for f, g in itertools.product(REL3, repeat=2):
        fg = compose(f, g)
        if not fg.support_set <= f.support_set | g.support_set:
            bad_sub += 1
        if f.support_set.isdisjoint(g.support_set):
            disjoint += 1
            if not commutes(f, g, fast=False):
                bad_comm += 1
    verdict(2, bad_sub == 0 and bad_comm == 0,
            f"512^2 pairs; subadditivity failures {bad_sub}; "
            f"{disjoint} disjoint pairs, non-commuting {bad_comm}", time.perf_counter() - t0, 30)


def test_c03_associativity(verdict):
    t0 = time.perf_counter()
    rel2 = list(enumerate_rel((0, 1)))
    exhaustive = sum(compose(compose(f, g), h) != compose(f, compose(g, h))
                     for f, g, h in itertools.product(rel2, repeat=3))
    rng = random.Random(20260101)
    sampled = 0
    for _ in range(10 ** 5):
        f, g, h = rng.choice(REL3), rng.choice(REL3), rng.choice(REL3)
        sampled += compose(compose(f, g), h) != compose(f, compose(g, h))
    verdict(3, exhaustive == 0 and sampled == 0,
            f"4096 exhaustive triples: {exhaustive} failures; 1e5 sampled: {sampled} failures",
            time.perf_counter() - t0, 30)


def test_c04_oracle_equivalence(verdict):
    t0 = time.perf_counter()
    mismatches = sum(compose(f, g) != compose_naive(f, g) for f, g in itertools.product(REL3, repeat=2))
    verdict(4, mismatches == 0, f"512^2 pairs; {mismatches} mismatches", time.perf_counter() - t0, 60)


def prop2_cases(family):
    proper = [frozenset(c) for k in range(3) for c in itertools.combinations(W3, k)]
    for f in family.enumerate_window(W3):
        for F in proper:
            if f.support_set <= F:
                continue
            x = min(f.support_set - F)
            g = family.prop2_witness_raw(x, F | (f.support_set - {x}), FreshPoints(3))
            yield f, F, x, g


def test_c05_prop2_witnesses(verdict):
    t0 = time.perf_counter()
    checked = failures = 0
    for family in (frel_family(), fsym_family(), ffun_family()):
        for f, F, x, g in prop2_cases(family):
            checked += 1
            gx = apply(g, x)
            ok = (family.contains(g) and g.support_set.isdisjoint(F) and x not in gx and gx
                  and compose(f, g) != compose(g, f))
            failures += not ok
        rep = run_audit(AuditSpec("prop2", family.name, W3))
        failures += rep.failure_count
    verdict(5, failures == 0, f"{checked} (f, F) cases over frel/fsym/ffun; {failures} failures",
            time.perf_counter() - t0, 60)


def test_c06_fdc_audit(verdict):
    t0 = time.perf_counter()
    failures = checked = 0
    for family, window in ((fsym_family(), range(5)), (frel_family(), W3)):
        rep = run_audit(AuditSpec("fdc", family.name, window, targets=(T01,)))
        escaping = [g for g in family.enumerate_window(window) if not g.support_set <= {0, 1}]
        checked += rep.checked
        failures += rep.failure_count + (rep.checked != len(escaping))
        for entry in rep.details["entries"]:
            g, h = from_json(entry["g"]), from_json(entry["h"])
            if not family.contains(h) or h.support_set & {0, 1} or compose(h, g) == compose(g, h):
                failures += 1
    verdict(6, failures == 0, f"{checked} escaping g certified (fsym 0..4, frel 0..2); {failures} failures",
            time.perf_counter() - t0, 60)


def isolated_exactly(family, w, kind):
    ext = tuple(sorted(set(W3) | set(witness_points(w))))
    sub = WindowedSubset(family, ext, kind, w.n)
    pool = list(enumerate_filtered(sub))
    return [h for h in pool if in_neighborhood(w, h)] == [w.center], len(pool)


def test_c07_isolation(verdict):
    t0 = time.perf_counter()
    failures = 0
    sizes = []
    for f in enumerate_filtered(WindowedSubset(fsym_family(), W3, "supp_eq", 2)):
        w = isolation_witness(fsym_family(), f, FreshPoints(3))
        ok_le, n_le = isolated_exactly(fsym_family(), w, "supp_le")
        ok_eq, _ = isolated_exactly(fsym_family(), w, "supp_eq")
        sizes.append(n_le)
        failures += not (ok_le and ok_eq and n_le >= 29)
    singles = list(enumerate_filtered(WindowedSubset(frel_family(), W3, "supp_eq", 1)))
    for f in singles:
        w = isolation_witness(frel_family(), f, FreshPoints(3))
        ok, _ = isolated_exactly(frel_family(), w, "supp_eq")
        failures += not ok
    for family, n in ((fsym_family(), 2), (frel_family(), 1)):
        failures += len(verify_theorem_main(family, n, W3).discrete.failures)
    verdict(7, failures == 0 and len(sizes) == 3 and len(singles) == 3,
            f"3 transpositions isolated in FSym<=2 (pools {sizes}); {len(singles)} FRel_=1 elements "
            f"isolated; {failures} failures", time.perf_counter() - t0, 120)


def test_c08_closed_and_open(verdict):
    t0 = time.perf_counter()
    rep = verify_theorem_main(fsym_family(), 2, W3)
    ok = (rep.closed.verdict == "pass" and rep.open.verdict == "pass"
          and rep.closed.checked == 2 and rep.open.checked == 6)
    verdict(8, ok, f"closedness {rep.closed.checked} centers ({rep.closed.verdict}); "
            f"openness {rep.open.checked} (f, x) cases ({rep.open.verdict})",
            time.perf_counter() - t0, 120)


def test_c09_generated_closure(verdict):
    t0 = time.perf_counter()
    sizes = [len(generated_family(g)) for g in
             ([perm("(0 1)"), perm("(1 2)")], [perm("(0 1)")], [FiniteRelation(support=(0,))])]
    verdict(9, sizes == [6, 2, 1], f"closure sizes {sizes}", time.perf_counter() - t0, 1)


def structural_failures(w):
    bad = 0
    bad += any(commutes(w.center, g) for g in w.commute_constraints)
    bad += w.center in w.exclusions
    bad += len(w.commute_constraints) > len(w.center.support) * (w.n + 1)
    pos = 0
    for step in w.trace:
        size = 1 if step.branch == "A" else w.n + 1
        fam = w.commute_constraints[pos:pos + size]
        pos += size
        if step.branch == "B":
            bad += any(g.support_set & h.support_set - {step.x}
                       for g, h in itertools.combinations(fam, 2))
            bad += any(g.support_set <= {step.x} for g in fam)
        else:
            bad += not all(g.support_set <= {step.x} for g in fam)
    bad += pos != len(w.commute_constraints)
    return bad


def test_c10_witness_structure(verdict):
    t0 = time.perf_counter()
    witnesses = []
    witnesses += verify_theorem_main(fsym_family(), 2, W3).witnesses
    witnesses += verify_theorem_main(frel_family(), 1, W3).witnesses
    witnesses += [isolation_witness(fsym_family(), f, FreshPoints(3))
                  for f in enumerate_filtered(WindowedSubset(fsym_family(), W3, "supp_eq", 2))]
    failures = sum(structural_failures(w) for w in witnesses)
    pairs = 0
    for family in (frel_family(), fsym_family(), ffun_family()):
        for f, F, x, g in prop2_cases(family):
            pairs += 1
            failures += commutes(f, g)
    verdict(10, failures == 0, f"{len(witnesses)} neighborhood witnesses and {pairs} single witnesses; "
            f"{failures} structural failures", time.perf_counter() - t0, 120)
