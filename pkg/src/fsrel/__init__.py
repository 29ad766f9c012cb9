"""Semigroups of finitely supported relations and their discreteness witnesses."""

from .relation import (
    IDENTITY,
    FiniteRelation,
    RelationError,
    WindowCapError,
    apply,
    apply_set,
    canonicalize,
    commutes,
    compose,
    compose_naive,
    enumerate_rel,
    format_relation,
    inverse,
    parse_relation,
    perm,
    support,
)
from .families import (
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
from .centralizer import CentralizerQuery, centralizer_window, double_centralizer_window, fdc_audit
from .zariski import (
    UNIT,
    NeConst,
    NePair,
    NeighborhoodWitness,
    constraint_holds,
    isolation_witness,
    lemma1_family,
    lemma2_neighborhood,
    verify_neighborhood,
    verify_theorem_main,
)
from .audit import AuditSpec, run_audit

__version__ = "0.1.0"
