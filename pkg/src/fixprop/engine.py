"""Fixpoint iteration engines with pluggable re-enqueue policies.

Three engines share one contract: given inflationary, monotone functions on
a partial order with a least element, compute their least common fixpoint.

``gi_run`` iterates functions over an arbitrary ordering.  After applying a
function ``g`` that moved the state from ``d`` to ``e``, it re-enqueues the
currently parked functions that were fixed at ``d`` but are no longer fixed
at ``e``, plus ``g`` itself when ``g(e) != e`` (only non-idempotent
functions need that clause).  This is the tightest re-enqueue set that
keeps the loop invariant "every parked function is fixed at the current
state", and it costs two evaluations per parked function per step.

``cd_run`` specializes to product states where each function reads and
writes only the coordinates of its scheme.  There the re-enqueue set is
computed structurally: every function not on the worklist whose scheme
meets a changed coordinate.  That set over-approximates the one above, so
the same invariant holds without re-evaluating anything.

An :class:`UpdatePolicy` may shrink either set further:

* ``idem``: drop the just-applied function itself when it is idempotent;
* ``comm``: drop every function in a declared commuting set of the
  just-applied function;
* ``both``: apply both reductions.

All variants leave the least common fixpoint unchanged; they only trim
redundant work.  Both engines monitor the termination measure at runtime
(the state strictly grows, or it is unchanged and the worklist shrinks) and
raise :class:`~fixprop.errors.InvariantViolation` when a function breaks
it.  :func:`verify_measure` re-checks a finished trace.

``si_run`` applies an ordered function list exactly once each.  When every
function is idempotent and semi-commutes with all functions after it in
the list (f then g reaches a state at least as high as g then f), the
single pass already lands on the least common fixpoint.
"""

from __future__ import annotations

import warnings
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Mapping, Sequence

from .errors import InvariantViolation, StepLimitExceeded, StructuralError
from .orders import Scheme, State, changed_coords, lift, slice_state, state_leq

DEFAULT_STEP_LIMIT = 10**6

POLICY_VARIANTS = ("full", "idem", "comm", "both")


@dataclass(frozen=True, eq=False)
class PropagatorFn:
    """A named function over states.

    With a scheme, ``apply`` maps the scheme's slice to a slice of the same
    width.  With ``scheme=None`` the function acts on whole elements of an
    arbitrary ordering (the form ``gi_run`` takes).  ``tags`` carries
    free-form metadata used to build commuting sets.
    """

    id: str
    scheme: Scheme | None
    apply: Callable[[Any], Any]
    idempotent: bool = False
    tags: Mapping[str, Any] = field(default_factory=dict)

    def __repr__(self) -> str:  # concise; apply closures are noise
        return f"PropagatorFn({self.id!r}, scheme={self.scheme})"


@dataclass(frozen=True)
class UpdatePolicy:
    """How to shrink a re-enqueue set after applying a function.

    ``comm`` maps a function id to ids that commute with it; entries are
    consulted only under the ``comm`` and ``both`` variants.
    """

    variant: str = "full"
    comm: Mapping[str, frozenset] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.variant not in POLICY_VARIANTS:
            raise StructuralError(
                f"unknown policy variant {self.variant!r}; expected one of {POLICY_VARIANTS}"
            )
        comm = {k: frozenset(v) for k, v in self.comm.items()}
        for k, ids in comm.items():
            if k in ids:
                raise StructuralError(f"function {k!r} may not commute-list itself")
        object.__setattr__(self, "comm", comm)

    def shrink(self, base: set, g: PropagatorFn) -> set:
        out = set(base)
        if self.variant in ("idem", "both") and g.idempotent:
            out.discard(g.id)
        if self.variant in ("comm", "both"):
            out -= self.comm.get(g.id, frozenset())
        return out


class Worklist:
    """Duplicate-free queue of function ids with FIFO or LIFO selection.

    Membership is restricted to a fixed universe of functions; additions
    enter in the universe's declaration order, which keeps runs
    deterministic.  By default the whole universe starts queued.
    """

    def __init__(
        self,
        universe: Sequence[PropagatorFn],
        *,
        selection: str = "fifo",
        initial: Iterable[str] | None = None,
    ):
        if selection not in ("fifo", "lifo"):
            raise StructuralError(f"selection must be 'fifo' or 'lifo', got {selection!r}")
        self.fns = _registry(universe)
        self.priority = {fid: k for k, fid in enumerate(self.fns)}
        self.selection = selection
        self._queue: deque = deque()
        self._members: set = set()
        self.push(self.fns if initial is None else initial)

    def push(self, ids: Iterable[str]) -> tuple[str, ...]:
        """Add ids not already queued; returns what was added, in order."""
        added = []
        for fid in sorted(ids, key=self._rank):
            if fid not in self._members:
                self._members.add(fid)
                self._queue.append(fid)
                added.append(fid)
        return tuple(added)

    def _rank(self, fid: str) -> int:
        try:
            return self.priority[fid]
        except KeyError:
            raise StructuralError(f"id {fid!r} is not in the worklist universe") from None

    def pop(self) -> str:
        fid = self._queue.popleft() if self.selection == "fifo" else self._queue.pop()
        self._members.remove(fid)
        return fid

    def __contains__(self, fid: object) -> bool:
        return fid in self._members

    def __len__(self) -> int:
        return len(self._queue)

    def __bool__(self) -> bool:
        return bool(self._queue)

    def parked(self) -> tuple[str, ...]:
        """Universe ids currently off the worklist, in declaration order."""
        return tuple(fid for fid in self.priority if fid not in self._members)


@dataclass(frozen=True)
class TraceStep:
    step: int
    fn_id: str
    changed: tuple[int, ...]
    enqueued: tuple[str, ...]
    worklist_size: int

    def render(self) -> str:
        changed = ",".join(str(i + 1) for i in self.changed)
        enq = ",".join(self.enqueued)
        return (
            f"{self.step}\t{self.fn_id}\tchanged={{{changed}}}"
            f"\tenqueued={{{enq}}}\t|G|={self.worklist_size}"
        )


@dataclass(frozen=True)
class IterationTrace:
    """Step-by-step record of a run: what ran, what changed, what was queued."""

    initial_size: int
    steps: tuple[TraceStep, ...]

    def lines(self) -> list[str]:
        return [s.render() for s in self.steps]

    def insertions(self) -> int:
        """Total ids added to the worklist after the initial seeding."""
        return sum(len(s.enqueued) for s in self.steps)


def verify_measure(trace: IterationTrace) -> bool:
    """Check that every step decreased the pair (state, worklist size)
    lexicographically: either the state strictly grew, or it was unchanged
    and the worklist shrank."""
    size = trace.initial_size
    for s in trace.steps:
        if not s.changed and s.worklist_size >= size:
            return False
        size = s.worklist_size
    return True


def _registry(fns: Sequence[PropagatorFn]) -> dict[str, PropagatorFn]:
    reg: dict[str, PropagatorFn] = {}
    for f in fns:
        if f.id in reg:
            raise StructuralError(f"duplicate function id {f.id!r}")
        reg[f.id] = f
    return reg


def ground(fn: PropagatorFn, arity: int) -> PropagatorFn:
    """Lift a scheme-function to whole states, keeping id and metadata."""
    if fn.scheme is None:
        return fn
    return PropagatorFn(
        id=fn.id,
        scheme=None,
        apply=lift(fn.apply, fn.scheme, arity),
        idempotent=fn.idempotent,
        tags=fn.tags,
    )


def ground_all(fns: Sequence[PropagatorFn], arity: int) -> list[PropagatorFn]:
    return [ground(f, arity) for f in fns]


def gi_run(
    fns: Sequence[PropagatorFn],
    bottom: Any,
    policy: UpdatePolicy | None = None,
    *,
    selection: str = "fifo",
    leq: Callable[[Any, Any], bool] = state_leq,
    step_limit: int = DEFAULT_STEP_LIMIT,
    debug: bool = False,
) -> tuple[Any, IterationTrace]:
    """Worklist iteration over an arbitrary partial order.

    Functions act on whole elements (schemes are ignored).  ``leq`` is the
    order used by the runtime measure monitor.  Returns the least common
    fixpoint and the trace.
    """
    policy = policy or UpdatePolicy()
    worklist = Worklist(fns, selection=selection)
    reg = worklist.fns
    d = bottom
    steps: list[TraceStep] = []
    cache: dict[tuple, Any] = {}

    def value(f: PropagatorFn, at: Any) -> Any:
        key = (f.id, at)
        try:
            return cache[key]
        except TypeError:  # unhashable element; evaluate directly
            return f.apply(at)
        except KeyError:
            out = cache[key] = f.apply(at)
            return out

    n = 0
    while worklist:
        if debug:
            for fid in worklist.parked():
                if value(reg[fid], d) != d:
                    raise InvariantViolation(
                        f"parked function {fid!r} is not fixed at the current element"
                    )
        gid = worklist.pop()
        g = reg[gid]
        e = value(g, d)
        if e != d and not leq(d, e):
            raise InvariantViolation(f"function {gid!r} moved the element without growing it")
        if e != d:
            # tightest re-enqueue set: parked functions fixed at d, broken at e,
            # plus g itself when not fixed at its own output (a function fixed
            # nowhere on the climb would otherwise never run again)
            base = {
                f.id
                for f in reg.values()
                if f.id not in worklist and value(f, d) == d and value(f, e) != e
            }
            if value(g, e) != e:
                base.add(gid)
        else:
            base = set()
        enqueued = worklist.push(policy.shrink(base, g))
        n += 1
        steps.append(TraceStep(n, gid, changed_coords(d, e), enqueued, len(worklist)))
        d = e
        if n >= step_limit and worklist:
            raise StepLimitExceeded(f"gi_run exceeded {step_limit} steps")
    return d, IterationTrace(len(reg), tuple(steps))


def update_set(
    worklist: Worklist,
    g: PropagatorFn,
    d_before: State,
    d_after: State,
    policy: UpdatePolicy | None = None,
) -> tuple[str, ...]:
    """Structural re-enqueue set for a scheme-function application.

    ``d_after`` must agree with ``d_before`` outside the scheme of ``g``.
    Returns, in declaration order, every universe function off the worklist
    whose scheme meets a changed coordinate, shrunk by the policy.  Empty
    whenever nothing changed.
    """
    policy = policy or UpdatePolicy()
    if g.scheme is None:
        raise StructuralError(f"function {g.id!r} has no scheme")
    changed = changed_coords(d_before, d_after)
    outside = [i for i in changed if i not in g.scheme]
    if outside:
        raise StructuralError(
            f"function {g.id!r} changed coordinates {outside} outside its scheme"
        )
    if not changed:
        return ()
    touched = set(changed)
    base = {
        fid
        for fid, f in worklist.fns.items()
        if fid not in worklist and not touched.isdisjoint(f.scheme)
    }
    return tuple(sorted(policy.shrink(base, g), key=worklist.priority.__getitem__))


def cd_run(
    fns: Sequence[PropagatorFn],
    bottoms: Sequence[frozenset],
    policy: UpdatePolicy | None = None,
    *,
    selection: str = "fifo",
    step_limit: int = DEFAULT_STEP_LIMIT,
    debug: bool = False,
) -> tuple[State, IterationTrace]:
    """Worklist iteration over a product state, one coordinate set per index.

    Each function reads and writes only its scheme's slice.  Equivalent to
    ``gi_run`` over the lifted functions, but re-enqueues by scheme overlap
    instead of re-evaluating parked functions.
    """
    policy = policy or UpdatePolicy()
    worklist = Worklist(fns, selection=selection)
    reg = worklist.fns
    arity = len(bottoms)
    for f in reg.values():
        if f.scheme is None:
            raise StructuralError(f"function {f.id!r} has no scheme")
        f.scheme.check_arity(arity)
    d: State = tuple(frozenset(b) for b in bottoms)
    steps: list[TraceStep] = []
    n = 0
    while worklist:
        if debug:
            for fid in worklist.parked():
                f = reg[fid]
                piece = slice_state(d, f.scheme)
                if tuple(f.apply(piece)) != piece:
                    raise InvariantViolation(
                        f"parked function {fid!r} is not fixed at the current state"
                    )
        gid = worklist.pop()
        g = reg[gid]
        old = slice_state(d, g.scheme)
        new = tuple(g.apply(old))
        if len(new) != len(old):
            raise StructuralError(
                f"function {gid!r} returned {len(new)} coordinates for scheme {g.scheme}"
            )
        for i, before, after in zip(g.scheme, old, new):
            if not after <= before:
                raise InvariantViolation(
                    f"function {gid!r} grew coordinate {i + 1} instead of shrinking it"
                )
        if new != old:
            e = list(d)
            for i, value in zip(g.scheme, new):
                e[i] = value
            e = tuple(e)
        else:
            e = d
        enqueued = worklist.push(update_set(worklist, g, d, e, policy))
        n += 1
        steps.append(TraceStep(n, gid, changed_coords(d, e), enqueued, len(worklist)))
        d = e
        if n >= step_limit and worklist:
            raise StepLimitExceeded(f"cd_run exceeded {step_limit} steps")
    return d, IterationTrace(len(reg), tuple(steps))


def si_run(
    fns: Sequence[PropagatorFn],
    bottoms: Sequence[frozenset],
    *,
    debug: bool = False,
) -> tuple[State, IterationTrace]:
    """Apply an ordered list of scheme-functions exactly once each.

    The caller is responsible for the list order: every function must
    semi-commute with all functions after it (checked on random samples in
    debug mode, as a warning).  Under that obligation the single pass
    returns the least common fixpoint of the whole set.
    """
    _registry(fns)  # id uniqueness
    arity = len(bottoms)
    d: State = tuple(frozenset(b) for b in bottoms)
    for f in fns:
        if f.scheme is None:
            raise StructuralError(f"function {f.id!r} has no scheme")
        f.scheme.check_arity(arity)
    if debug:
        _spot_check_semi_commutation(fns, d)
    steps: list[TraceStep] = []
    remaining = len(fns)
    for f in fns:
        old = slice_state(d, f.scheme)
        new = tuple(f.apply(old))
        for i, before, after in zip(f.scheme, old, new):
            if not after <= before:
                raise InvariantViolation(
                    f"function {f.id!r} grew coordinate {i + 1} instead of shrinking it"
                )
        changed = tuple(i for i, (x, y) in zip(f.scheme, zip(old, new)) if x != y)
        if changed:
            e = list(d)
            for i, value in zip(f.scheme, new):
                e[i] = value
            d = tuple(e)
        remaining -= 1
        steps.append(TraceStep(len(steps) + 1, f.id, changed, (), remaining))
    return d, IterationTrace(len(fns), tuple(steps))


def semi_commutes(
    f: PropagatorFn, g: PropagatorFn, state: State, arity: int | None = None
) -> bool:
    """True iff applying g then f lands at least as high as f then g,
    coordinatewise: every set of f(g(state)) contains the matching set of
    g(f(state))."""
    arity = len(state) if arity is None else arity
    lf, lg = ground(f, arity), ground(g, arity)
    fg = lf.apply(lg.apply(state))
    gf = lg.apply(lf.apply(state))
    return all(y <= x for x, y in zip(fg, gf))


def _spot_check_semi_commutation(fns: Sequence[PropagatorFn], bottom: State) -> None:
    import random

    rng = random.Random(0)
    k = len(fns)
    if k < 2:
        return
    pairs = [(i, j) for i in range(k) for j in range(i + 1, k)]
    rng.shuffle(pairs)
    for i, j in pairs[:8]:
        for _ in range(3):
            state = tuple(
                frozenset(v for v in dom if rng.random() < 0.7) for dom in bottom
            )
            if not semi_commutes(fns[i], fns[j], state):
                warnings.warn(
                    f"list order suspect: {fns[i].id!r} does not semi-commute "
                    f"with {fns[j].id!r}",
                    stacklevel=3,
                )
                return
