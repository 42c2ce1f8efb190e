# cython: language_level=3
"""Compiled set-filtering kernels. Mirror of _kernels_py; same names, same contracts."""


def restrict_pairs(pairs, xs, ys, int side):
    """Supported values on one side of a pair relation.

    side 1: {a | (a, b) in pairs, a in xs, b in ys}
    side 2: {b | (a, b) in pairs, a in xs, b in ys}
    """
    cdef set out = set()
    cdef tuple t
    if side == 1:
        for t in pairs:
            if t[0] in xs and t[1] in ys:
                out.add(t[0])
    elif side == 2:
        for t in pairs:
            if t[0] in xs and t[1] in ys:
                out.add(t[1])
    else:
        raise ValueError(f"side must be 1 or 2, got {side!r}")
    return frozenset(out)


def project_tuples(tuples, sets, Py_ssize_t coord):
    """Coordinate ``coord`` values of the tuples lying inside the product of ``sets``."""
    cdef set out = set()
    cdef tuple t, ss = tuple(sets)
    cdef Py_ssize_t k = len(ss), i
    cdef bint ok
    for t in tuples:
        ok = True
        for i in range(k):
            if t[i] not in ss[i]:
                ok = False
                break
        if ok:
            out.add(t[coord])
    return frozenset(out)


def witness_filter(target, a_pairs, b_pairs):
    """Pairs (u, v) of ``target`` with a shared witness w: (u, w) in a_pairs and (v, w) in b_pairs."""
    cdef dict a_idx = {}
    cdef dict b_idx = {}
    cdef tuple t
    cdef set s, sa, sb
    for t in a_pairs:
        s = <set> a_idx.get(t[0])
        if s is None:
            s = set()
            a_idx[t[0]] = s
        s.add(t[1])
    for t in b_pairs:
        s = <set> b_idx.get(t[0])
        if s is None:
            s = set()
            b_idx[t[0]] = s
        s.add(t[1])
    cdef set out = set()
    for t in target:
        sa = <set> a_idx.get(t[0])
        if sa is None:
            continue
        sb = <set> b_idx.get(t[1])
        if sb is None:
            continue
        if not sa.isdisjoint(sb):
            out.add(t)
    return frozenset(out)
