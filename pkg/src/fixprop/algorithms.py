"""Consistency algorithms assembled from the iteration engines.

Worklist algorithms (run until the queue drains):

* hyper_arc: projection functions over the domain product, scheme-aware
  re-enqueue, idempotence skipping by default.
* ac3: the binary constraint-plus-transpose family, with both idempotence
  and commutation skipping by default.
* path, pc2: composition functions over the pair-relation product of a
  normalized CSP.  path re-enqueues every function whose scheme meets a
  changed coordinate; pc2 additionally skips the function itself and its
  commutation partners.

One-pass algorithms (apply an ordered list once):

* darc: for the variable order x1..xn, the support filters of binary
  constraints grouped by their higher variable, highest group first.
* dpath: per triple i < j < m only the function rewriting the (i,j)
  relation, grouped by m descending.
* dac, dpc: the same computations written as literal loops over domains
  and relations, no engine involved.  Both require every variable pair to
  carry exactly one binary constraint, which normalize() arranges.

Each returns an AlgorithmResult carrying the reduced CSP, the iteration
trace, and a consistency hint: False when some domain or constraint
relation came out empty.  An empty set does not stop the run; remaining
steps still execute.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .engine import (
    DEFAULT_STEP_LIMIT,
    IterationTrace,
    PropagatorFn,
    TraceStep,
    UpdatePolicy,
    cd_run,
    si_run,
)
from .errors import UnsupportedInputError
from .model import Csp, NormalizedCsp, compose, reorder, transpose
from .propagators import (
    _labels,
    _path_fn,
    _projection_fn,
    ac3_comm_map,
    ac3_fns,
    arc_comm_map,
    has_unique_pair_constraints,
    path_comm_map,
    path_fns,
    projection_fns,
)


@dataclass(frozen=True)
class AlgorithmResult:
    """Reduced CSP, the trace of the run, and a consistency hint."""

    csp: Csp
    trace: IterationTrace
    consistent_hint: bool


def _hint(csp: Csp) -> bool:
    return all(csp.domains) and all(c.tuples for c in csp.constraints)


def _policy(variant: str, comm_map) -> UpdatePolicy:
    if variant in ("full", "idem"):
        return UpdatePolicy(variant)
    return UpdatePolicy(variant, comm_map())


def hyper_arc(
    p: Csp,
    *,
    policy: str = "idem",
    selection: str = "fifo",
    step_limit: int = DEFAULT_STEP_LIMIT,
    debug: bool = False,
) -> AlgorithmResult:
    """Prune domains until every constraint projects onto them exactly."""
    fns = projection_fns(p)
    pol = _policy(policy, lambda: arc_comm_map(fns))
    final, trace = cd_run(
        fns, p.domains, pol, selection=selection, step_limit=step_limit, debug=debug
    )
    out = p.with_domains(final)
    return AlgorithmResult(out, trace, _hint(out))


def ac3(
    p: Csp,
    *,
    policy: str = "both",
    selection: str = "fifo",
    step_limit: int = DEFAULT_STEP_LIMIT,
    debug: bool = False,
) -> AlgorithmResult:
    """Binary-only domain pruning via per-side support filters."""
    fns = ac3_fns(p)
    unique = has_unique_pair_constraints(p)
    pol = _policy(policy, lambda: ac3_comm_map(fns, unique_pairs=unique))
    final, trace = cd_run(
        fns, p.domains, pol, selection=selection, step_limit=step_limit, debug=debug
    )
    out = p.with_domains(final)
    return AlgorithmResult(out, trace, _hint(out))


def _require_normalized(p: Csp, what: str) -> NormalizedCsp:
    if not isinstance(p, NormalizedCsp):
        raise UnsupportedInputError(
            f"{what} works on a normalized CSP (one binary constraint per "
            "variable pair, pairs in order); call normalize() first"
        )
    return p


def path(
    np: NormalizedCsp,
    *,
    policy: str = "full",
    selection: str = "fifo",
    step_limit: int = DEFAULT_STEP_LIMIT,
    debug: bool = False,
) -> AlgorithmResult:
    """Prune pair relations until every triple is closed under composition."""
    np = _require_normalized(np, "path")
    fns = path_fns(np)
    pol = _policy(policy, lambda: path_comm_map(fns, np.variables))
    bottoms = tuple(c.tuples for c in np.constraints)
    final, trace = cd_run(
        fns, bottoms, pol, selection=selection, step_limit=step_limit, debug=debug
    )
    out = np.with_relations(final)
    return AlgorithmResult(out, trace, _hint(out))


def pc2(
    np: NormalizedCsp,
    *,
    policy: str = "both",
    selection: str = "fifo",
    step_limit: int = DEFAULT_STEP_LIMIT,
    debug: bool = False,
) -> AlgorithmResult:
    """path with idempotence and commutation skipping switched on."""
    return path(
        np, policy=policy, selection=selection, step_limit=step_limit, debug=debug
    )


def darc_fns(q: Csp) -> list[PropagatorFn]:
    """Support filters of binary constraints grouped by second variable,
    highest variable first, within a group by first variable then by
    declaration order.  Constraints of other arities are skipped."""
    labels = _labels(q)
    n = len(q.variables)
    out = []
    for m in range(n - 1, -1, -1):
        group = [
            (c.scheme.indices[0], ci)
            for ci, c in enumerate(q.constraints)
            if c.arity == 2 and c.scheme.indices[1] == m
        ]
        for _, ci in sorted(group):
            out.append(_projection_fn(q.constraints[ci], 0, labels[ci], ci))
    return out


def darc(p: Csp, order: Sequence[str], *, debug: bool = False) -> AlgorithmResult:
    """One pass of support filtering against the given variable order.

    After the pass, every binary constraint supports its lower variable
    from its higher one.  Returns the CSP in the new variable order.
    """
    q = reorder(p, order)
    final, trace = si_run(darc_fns(q), q.domains, debug=debug)
    out = q.with_domains(final)
    return AlgorithmResult(out, trace, _hint(out))


def _exactly_one_per_pair(q: Csp, what: str) -> dict[tuple[int, int], int]:
    per_pair: dict[tuple[int, int], int] = {}
    for ci, c in enumerate(q.constraints):
        if c.arity != 2:
            raise UnsupportedInputError(
                f"{what} handles binary constraints only, got arity {c.arity}"
            )
        pair = c.scheme.indices
        if pair in per_pair:
            raise UnsupportedInputError(
                f"{what} needs exactly one constraint per variable pair; "
                f"{q.variables[pair[0]]},{q.variables[pair[1]]} has several"
            )
        per_pair[pair] = ci
    n = len(q.variables)
    for pair in itertools.combinations(range(n), 2):
        if pair not in per_pair:
            raise UnsupportedInputError(
                f"{what} needs exactly one constraint per variable pair; "
                f"{q.variables[pair[0]]},{q.variables[pair[1]]} has none "
                "(normalize() fills missing pairs with universal relations)"
            )
    return per_pair


def dac(p: Csp, order: Sequence[str]) -> AlgorithmResult:
    """The darc computation as a literal double loop over domains.

    Requires exactly one binary constraint on every variable pair.  For
    j from the last variable down to the second, each earlier domain is
    filtered to the values with a partner in domain j.
    """
    q = reorder(p, order)
    per_pair = _exactly_one_per_pair(q, "dac")
    n = len(q.variables)
    doms = list(q.domains)
    total = n * (n - 1) // 2
    steps = []
    step = 0
    for j in range(n - 1, 0, -1):
        for i in range(j):
            rel = q.constraints[per_pair[i, j]].tuples
            kept = frozenset(a for a in doms[i] if any((a, b) in rel for b in doms[j]))
            step += 1
            changed = (i,) if kept != doms[i] else ()
            doms[i] = kept
            steps.append(TraceStep(step, f"dac:{i},{j}", changed, (), total - step))
    out = q.with_domains(tuple(doms))
    return AlgorithmResult(out, IterationTrace(total, tuple(steps)), _hint(out))


def dpath_fns(q: NormalizedCsp) -> list[PropagatorFn]:
    """Per triple i < j < m only the function rewriting the (i,j) relation,
    grouped by m descending, within a group by (i,j)."""
    n = len(q.variables)
    return [
        _path_fn(q, i, j, m, "xy")
        for m in range(n - 1, 1, -1)
        for i, j in itertools.combinations(range(m), 2)
    ]


def dpath(
    np: NormalizedCsp, order: Sequence[str], *, debug: bool = False
) -> AlgorithmResult:
    """One pass of composition filtering against the given variable order.

    After the pass, every pair relation is closed under composition
    through any later variable.  Returns the CSP in the new order.
    """
    np = _require_normalized(np, "dpath")
    q = reorder(np, order)
    bottoms = tuple(c.tuples for c in q.constraints)
    final, trace = si_run(dpath_fns(q), bottoms, debug=debug)
    out = q.with_relations(final)
    return AlgorithmResult(out, trace, _hint(out))


def dpc(np: NormalizedCsp, order: Sequence[str]) -> AlgorithmResult:
    """The dpath computation as a literal triple loop over relations.

    For m from the last variable down to the third, every earlier pair
    relation (i,j) keeps the pairs that reach m both ways:
    C(i,j) := C(i,j) meet C(i,m) composed with the transpose of C(j,m).
    """
    np = _require_normalized(np, "dpc")
    q = reorder(np, order)
    n = len(q.variables)
    rels = {
        pair: q.relation(*pair) for pair in itertools.combinations(range(n), 2)
    }
    total = sum(m * (m - 1) // 2 for m in range(2, n))
    steps = []
    step = 0
    for m in range(n - 1, 1, -1):
        for j in range(1, m):
            for i in range(j):
                new = rels[i, j] & compose(rels[i, m], transpose(rels[j, m]))
                step += 1
                changed = (q.pair_pos(i, j),) if new != rels[i, j] else ()
                rels[i, j] = new
                steps.append(TraceStep(step, f"dpc:{i},{j}^{m}", changed, (), total - step))
    final = tuple(rels[pair] for pair in itertools.combinations(range(n), 2))
    out = q.with_relations(final)
    return AlgorithmResult(out, IterationTrace(total, tuple(steps)), _hint(out))
