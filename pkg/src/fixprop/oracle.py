"""Brute-force reference implementations for cross-checking.

Everything here is written the slow, obvious way on purpose: set
comprehensions over full products and a round-robin sweep instead of a
worklist.  Nothing is shared with the engine or the compiled kernels, so
agreement between the two routes is meaningful evidence.

Caps guard against accidental blowups; exceeding one raises
ResourceLimitError rather than hanging.
"""

from __future__ import annotations

import itertools
from math import prod
from typing import Sequence

from .errors import ResourceLimitError
from .model import Csp, NormalizedCsp, reorder

DEFAULT_CAP = 10**6


def enumerate_solutions(p: Csp, cap: int = DEFAULT_CAP) -> frozenset[tuple]:
    """All assignments (one value per variable, in variable order)
    satisfying every constraint, by checking the full domain product."""
    if prod(len(d) for d in p.domains) > cap:
        raise ResourceLimitError(
            f"domain product exceeds the enumeration cap of {cap}"
        )
    doms = [sorted(d) for d in p.domains]
    return frozenset(
        assign
        for assign in itertools.product(*doms)
        if all(
            tuple(assign[i] for i in c.scheme) in c.tuples for c in p.constraints
        )
    )


def roundrobin_fixpoint(fns, bottoms: Sequence[frozenset], cap: int = DEFAULT_CAP):
    """Apply every function in turn, over and over, until a full sweep
    changes nothing.  Functions carry a scheme (indices into the state
    tuple) or scheme None for whole-state functions."""
    state = tuple(frozenset(b) for b in bottoms)
    applications = 0
    while True:
        changed = False
        for f in fns:
            applications += 1
            if applications > cap:
                raise ResourceLimitError(
                    f"round-robin exceeded the application cap of {cap}"
                )
            if f.scheme is None:
                new = tuple(f.apply(state))
            else:
                idx = tuple(f.scheme)
                piece = tuple(f.apply(tuple(state[i] for i in idx)))
                parts = list(state)
                for at, value in zip(idx, piece):
                    parts[at] = value
                new = tuple(parts)
            if new != state:
                changed = True
                state = new
        if not changed:
            return state


def is_hyper_arc_consistent(p: Csp, cap: int = DEFAULT_CAP) -> bool:
    """Every domain equals the projection of every constraint on it."""
    for c in p.constraints:
        doms = [sorted(p.domains[i]) for i in c.scheme]
        if prod(len(d) for d in doms) > cap:
            raise ResourceLimitError(
                f"constraint product exceeds the enumeration cap of {cap}"
            )
        inside = [t for t in itertools.product(*doms) if t in c.tuples]
        for k, var in enumerate(c.scheme):
            if p.domains[var] != frozenset(t[k] for t in inside):
                return False
    return True


def _transpose(r):
    return frozenset((b, a) for a, b in r)


def _compose(r, s):
    return frozenset((a, d) for a, b in r for c, d in s if b == c)


def is_path_consistent(np: NormalizedCsp) -> bool:
    """Every pair relation is contained in the composition of the other
    two relations of each variable triple."""
    n = len(np.variables)
    for i, j, k in itertools.combinations(range(n), 3):
        p, q, r = np.relation(i, j), np.relation(i, k), np.relation(j, k)
        if not p <= _compose(q, _transpose(r)):
            return False
        if not q <= _compose(p, r):
            return False
        if not r <= _compose(_transpose(p), q):
            return False
    return True


def is_dir_arc_consistent(p: Csp, order: Sequence[str]) -> bool:
    """Each binary constraint supports its lower variable from its higher
    one, under the given variable order."""
    q = reorder(p, order)
    for c in q.constraints:
        if c.arity != 2:
            continue
        i, j = c.scheme.indices
        for a in q.domains[i]:
            if not any((a, b) in c.tuples for b in q.domains[j]):
                return False
    return True


def is_dir_path_consistent(np: NormalizedCsp, order: Sequence[str]) -> bool:
    """Each pair relation is closed under composition through any later
    variable, under the given variable order."""
    q = reorder(np, order)
    n = len(q.variables)
    for i, j, k in itertools.combinations(range(n), 3):
        p_ij = q.relation(i, j)
        if not p_ij <= _compose(q.relation(i, k), _transpose(q.relation(j, k))):
            return False
    return True
