"""Domain and relation propagators, and the commuting sets that let the
engine skip re-enqueueing them.

Two families are built here:

* projection functions: for a constraint on a scheme, coordinate i keeps
  the values that occur in position i of some constraint tuple lying
  inside the current coordinate sets.  Inflationary, monotone, idempotent.

* composition functions: for a variable triple x before y before z of a
  normalized CSP, each of the three pair relations is filtered by the join
  of the other two.  Writing P, Q, R for the relations on (x,y), (x,z),
  (y,z), the three functions keep the pairs of one relation that have a
  witness through the third variable.  Also inflationary, monotone,
  idempotent.

Commuting sets record pairs of functions whose applications can be swapped
without changing the outcome, which is what justifies dropping them from a
re-enqueue set:

* two projections of the same constraint commute, and so do projections of
  different constraints that write the same variable;
* two composition functions writing the same pair commute, giving exactly
  (number of variables - 3) partners per function;
* for the binary-with-transposes function family, a function's partners
  are its transpose twin (when the input has at most one constraint per
  variable pair) plus every function writing the same variable with a
  different support variable.  Without the at-most-one assumption the
  transpose twin is dropped from the set.
"""

from __future__ import annotations

import itertools
from typing import Sequence

from . import kernels
from .engine import PropagatorFn
from .errors import StructuralError, UnsupportedInputError
from .model import Constraint, Csp, NormalizedCsp, transpose
from .orders import Scheme

PATH_TARGETS = ("xy", "xz", "yz")


def project(c: Constraint, coord: int, sets: Sequence[frozenset]) -> tuple:
    """Apply the projection of ``c`` onto its ``coord``-th scheme position.

    Returns the slice with coordinate ``coord`` replaced by the values
    supported by some constraint tuple inside the given sets.
    """
    if len(sets) != c.arity:
        raise StructuralError(
            f"constraint {c.name or c.scheme} has arity {c.arity}, got {len(sets)} sets"
        )
    if not 0 <= coord < c.arity:
        raise StructuralError(f"coordinate {coord} out of range for arity {c.arity}")
    sets = tuple(sets)
    new = kernels.project_tuples(c.tuples_sorted, sets, coord)
    return sets[:coord] + (new,) + sets[coord + 1 :]


def project_binary(
    pairs, side: int, x: frozenset, y: frozenset
) -> tuple[frozenset, frozenset]:
    """One-sided support filter on a pair relation.

    side 1 keeps the x values with a partner in y; side 2 the y values with
    a partner in x.  The untouched set passes through.
    """
    if side == 1:
        return kernels.restrict_pairs(pairs, x, y, 1), y
    if side == 2:
        return x, kernels.restrict_pairs(pairs, x, y, 2)
    raise StructuralError(f"side must be 1 or 2, got {side!r}")


def path_apply(target: str, p: frozenset, q: frozenset, r: frozenset) -> tuple:
    """Filter one of three pair relations by the join of the other two.

    The relations sit on the pairs (x,y), (x,z), (y,z) of a variable triple
    x before y before z; ``target`` names the filtered one.

        xy: P' = {(a,b) in P | exists c: (a,c) in Q and (b,c) in R}
        xz: Q' = {(a,c) in Q | exists b: (a,b) in P and (b,c) in R}
        yz: R' = {(b,c) in R | exists a: (a,b) in P and (a,c) in Q}
    """
    if target == "xy":
        return kernels.witness_filter(p, q, r), q, r
    if target == "xz":
        return p, kernels.witness_filter(q, p, transpose(r)), r
    if target == "yz":
        return p, q, kernels.witness_filter(r, transpose(p), transpose(q))
    raise StructuralError(f"target must be one of {PATH_TARGETS}, got {target!r}")


def _labels(csp: Csp) -> list[str]:
    """Constraint labels, made unique by suffixing the constraint index."""
    base = [csp.constraint_name(i) for i in range(len(csp.constraints))]
    seen: dict[str, int] = {}
    for name in base:
        seen[name] = seen.get(name, 0) + 1
    return [
        name if seen[name] == 1 else f"{name}#{i}" for i, name in enumerate(base)
    ]


def _projection_fn(c: Constraint, coord: int, label: str, ci: int) -> PropagatorFn:
    if c.arity == 2:
        if coord == 0:
            def apply(sets, _pairs=c.tuples_sorted):
                return kernels.restrict_pairs(_pairs, sets[0], sets[1], 1), sets[1]
        else:
            def apply(sets, _pairs=c.tuples_sorted):
                return sets[0], kernels.restrict_pairs(_pairs, sets[0], sets[1], 2)
    else:
        def apply(sets, _c=c, _k=coord):
            new = kernels.project_tuples(_c.tuples_sorted, sets, _k)
            return sets[:_k] + (new,) + sets[_k + 1 :]

    return PropagatorFn(
        id=f"pi{coord + 1}:{label}",
        scheme=c.scheme,
        apply=apply,
        idempotent=True,
        tags={"constraint": ci, "coord": coord, "writes": c.scheme.indices[coord]},
    )


def projection_fns(csp: Csp) -> list[PropagatorFn]:
    """One projection function per constraint coordinate, in declaration order."""
    labels = _labels(csp)
    return [
        _projection_fn(c, k, labels[ci], ci)
        for ci, c in enumerate(csp.constraints)
        for k in range(c.arity)
    ]


def comm_arc(fn: PropagatorFn, fns: Sequence[PropagatorFn]) -> frozenset:
    """Ids of projection functions known to commute with ``fn``: the other
    projections of the same constraint, and projections of other
    constraints writing the same variable."""
    return frozenset(
        o.id
        for o in fns
        if o.id != fn.id
        and (
            o.tags["constraint"] == fn.tags["constraint"]
            or o.tags["writes"] == fn.tags["writes"]
        )
    )


def arc_comm_map(fns: Sequence[PropagatorFn]) -> dict[str, frozenset]:
    return {f.id: comm_arc(f, fns) for f in fns}


def has_unique_pair_constraints(csp: Csp) -> bool:
    """True iff no two binary constraints share a variable pair."""
    seen = set()
    for c in csp.constraints:
        if c.arity != 2:
            continue
        pair = c.scheme.indices
        if pair in seen:
            return False
        seen.add(pair)
    return True


def ac3_fns(csp: Csp) -> list[PropagatorFn]:
    """The binary family: for each constraint, the support filter of the
    constraint itself and of its transpose (one writes the first variable,
    the other the second)."""
    labels = _labels(csp)
    fns = []
    for ci, c in enumerate(csp.constraints):
        if c.arity != 2:
            raise UnsupportedInputError(
                f"constraint {c.name or c.scheme} has arity {c.arity}; "
                "this algorithm handles binary constraints only"
            )
        x, y = c.scheme.indices
        for transposed, side, writes, reads in ((False, 1, x, y), (True, 2, y, x)):
            suffix = "^T" if transposed else ""

            def apply(sets, _pairs=c.tuples_sorted, _side=side):
                filtered = kernels.restrict_pairs(_pairs, sets[0], sets[1], _side)
                return (filtered, sets[1]) if _side == 1 else (sets[0], filtered)

            fns.append(
                PropagatorFn(
                    id=f"pi1:{labels[ci]}{suffix}",
                    scheme=c.scheme,
                    apply=apply,
                    idempotent=True,
                    tags={
                        "base": ci,
                        "transposed": transposed,
                        "writes": writes,
                        "reads": reads,
                        "constraint": (ci, transposed),
                        "coord": 0 if not transposed else 1,
                    },
                )
            )
    return fns


def ac3_comm_map(
    fns: Sequence[PropagatorFn], *, unique_pairs: bool
) -> dict[str, frozenset]:
    """Commuting sets for the binary family.

    Always: every function writing the same variable with a different
    support variable.  With at most one constraint per pair, also the
    transpose twin of the same constraint.
    """
    out = {}
    for fn in fns:
        ids = set()
        for o in fns:
            if o.id == fn.id:
                continue
            if (
                unique_pairs
                and o.tags["base"] == fn.tags["base"]
                and o.tags["transposed"] != fn.tags["transposed"]
            ):
                ids.add(o.id)
            elif o.tags["writes"] == fn.tags["writes"] and o.tags["reads"] != fn.tags["reads"]:
                ids.add(o.id)
        out[fn.id] = frozenset(ids)
    return out


def _path_id(variables: Sequence[str], i: int, j: int, via: int) -> str:
    return f"f:{variables[i]},{variables[j]}^{variables[via]}"


def _path_fn(
    np: NormalizedCsp, i: int, j: int, k: int, target: str
) -> PropagatorFn:
    """The composition function of triple i < j < k that rewrites ``target``."""
    positions = (np.pair_pos(i, j), np.pair_pos(i, k), np.pair_pos(j, k))
    pair, via = {"xy": ((i, j), k), "xz": ((i, k), j), "yz": ((j, k), i)}[target]

    def apply(rels, _target=target):
        return path_apply(_target, rels[0], rels[1], rels[2])

    return PropagatorFn(
        id=_path_id(np.variables, pair[0], pair[1], via),
        scheme=Scheme(positions),
        apply=apply,
        idempotent=True,
        tags={"pair": pair, "via": via, "triple": (i, j, k), "target": target},
    )


def path_fns(np: NormalizedCsp) -> list[PropagatorFn]:
    """Three composition functions per variable triple, triples in
    lexicographic order."""
    n = len(np.variables)
    return [
        _path_fn(np, i, j, k, target)
        for i, j, k in itertools.combinations(range(n), 3)
        for target in PATH_TARGETS
    ]


def comm_path(fn: PropagatorFn, variables: Sequence[str]) -> frozenset:
    """Ids of the composition functions writing the same pair as ``fn``
    through a different third variable; always len(variables) - 3 ids."""
    i, j = fn.tags["pair"]
    via = fn.tags["via"]
    return frozenset(
        _path_id(variables, i, j, u)
        for u in range(len(variables))
        if u not in (i, j, via)
    )


def path_comm_map(
    fns: Sequence[PropagatorFn], variables: Sequence[str]
) -> dict[str, frozenset]:
    return {f.id: comm_path(f, variables) for f in fns}
