import itertools

from hypothesis import strategies as st

from fsrel.relation import canonicalize


def rel_from_code(window, code):
    """Relation whose graph over ``window`` has bit ``i*k+j`` for pair (window[i], window[j])."""
    k = len(window)
    pairs = [(window[i], window[j]) for i, j in itertools.product(range(k), repeat=2)
             if code >> (i * k + j) & 1]
    return canonicalize(window, pairs)


def semantic_support(window, pairs):
    """Support computed straight from the definition on the extension over ``window``."""
    out = set()
    for x in window:
        row = {q for p, q in pairs if p == x}
        col = {p for p, q in pairs if q == x}
        if row != {x} or col != {x}:
            out.add(x)
    return out


def relations_on(window):
    k = len(window)
    return st.integers(0, 2 ** (k * k) - 1).map(lambda c: rel_from_code(tuple(window), c))


small_relations = st.sampled_from([(0, 1), (0, 1, 2), (1, 3, 4), (2, 5, 7)]).flatmap(relations_on)
