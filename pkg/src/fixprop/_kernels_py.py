"""Pure-Python set-filtering kernels.

Mirror of the compiled module; same names, same contracts.
"""

_EMPTY = frozenset()


def restrict_pairs(pairs, xs, ys, side):
    """Supported values on one side of a pair relation.

    side 1: {a | (a, b) in pairs, a in xs, b in ys}
    side 2: {b | (a, b) in pairs, a in xs, b in ys}
    """
    if side == 1:
        return frozenset(a for a, b in pairs if a in xs and b in ys)
    if side == 2:
        return frozenset(b for a, b in pairs if a in xs and b in ys)
    raise ValueError(f"side must be 1 or 2, got {side!r}")


def project_tuples(tuples, sets, coord):
    """Coordinate ``coord`` values of the tuples lying inside the product of ``sets``."""
    out = set()
    k = len(sets)
    for t in tuples:
        ok = True
        for i in range(k):
            if t[i] not in sets[i]:
                ok = False
                break
        if ok:
            out.add(t[coord])
    return frozenset(out)


def witness_filter(target, a_pairs, b_pairs):
    """Pairs (u, v) of ``target`` with a shared witness w: (u, w) in a_pairs and (v, w) in b_pairs."""
    a_idx = {}
    for u, w in a_pairs:
        s = a_idx.get(u)
        if s is None:
            a_idx[u] = s = set()
        s.add(w)
    b_idx = {}
    for v, w in b_pairs:
        s = b_idx.get(v)
        if s is None:
            b_idx[v] = s = set()
        s.add(w)
    out = set()
    for t in target:
        sa = a_idx.get(t[0])
        if sa is None:
            continue
        sb = b_idx.get(t[1])
        if sb is None:
            continue
        if not sa.isdisjoint(sb):
            out.add(t)
    return frozenset(out)
