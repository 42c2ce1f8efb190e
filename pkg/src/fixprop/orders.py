"""Product orderings over tuples of finite value sets.

A state is a tuple of frozensets, one per coordinate.  States are compared
componentwise by reversed inclusion: ``a`` is below ``b`` exactly when every
coordinate set of ``b`` is contained in the corresponding set of ``a``.
Under this ordering the least state for a problem is the tuple of full base
sets, and a state grows as its coordinate sets shrink.  Propagation starts
at the least state and only ever climbs.

A :class:`Scheme` names the coordinates a function touches.  A function
defined on a scheme's slice is lifted to the whole state with :func:`lift`:
the lifted function rewrites the slice and leaves every other coordinate
unchanged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable, Iterator, Sequence

from .errors import StructuralError

State = tuple  # tuple[frozenset, ...]


@dataclass(frozen=True)
class Scheme:
    """Strictly increasing coordinate indices (0-based) of a function's footprint."""

    indices: tuple[int, ...]

    def __post_init__(self) -> None:
        idx = tuple(self.indices)
        object.__setattr__(self, "indices", idx)
        if not idx:
            raise StructuralError("scheme must name at least one coordinate")
        if any(i < 0 for i in idx):
            raise StructuralError(f"scheme indices must be non-negative: {idx}")
        if any(a >= b for a, b in zip(idx, idx[1:])):
            raise StructuralError(f"scheme indices must be strictly increasing: {idx}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self) -> Iterator[int]:
        return iter(self.indices)

    def __contains__(self, i: object) -> bool:
        return i in self.indices

    def check_arity(self, arity: int) -> None:
        """Raise unless every index fits a product of the given width."""
        if self.indices[-1] >= arity:
            raise StructuralError(
                f"scheme {self} does not fit a product of {arity} coordinates"
            )

    def __str__(self) -> str:
        # 1-based in user-facing text
        return "(" + ",".join(str(i + 1) for i in self.indices) + ")"


def slice_state(state: State, scheme: Scheme) -> tuple:
    """The sub-tuple of ``state`` at the scheme's coordinates."""
    scheme.check_arity(len(state))
    return tuple(state[i] for i in scheme.indices)


def lift(
    apply_fn: Callable[[tuple], tuple], scheme: Scheme, arity: int
) -> Callable[[State], State]:
    """Lift a function on a scheme's slice to a function on whole states.

    The result applies ``apply_fn`` to the slice and keeps all coordinates
    outside the scheme unchanged.
    """
    scheme.check_arity(arity)
    idx = scheme.indices

    def lifted(state: State) -> State:
        if len(state) != arity:
            raise StructuralError(
                f"expected a state of {arity} coordinates, got {len(state)}"
            )
        piece = apply_fn(tuple(state[i] for i in idx))
        if len(piece) != len(idx):
            raise StructuralError(
                f"function on scheme {scheme} returned {len(piece)} coordinates"
            )
        out = list(state)
        for i, value in zip(idx, piece):
            out[i] = value
        return tuple(out)

    return lifted


def state_leq(a: State, b: State) -> bool:
    """Componentwise reversed inclusion: true iff every b[i] is a subset of a[i]."""
    if len(a) != len(b):
        raise StructuralError(
            f"states of different widths are incomparable: {len(a)} vs {len(b)}"
        )
    return all(y <= x for x, y in zip(a, b))


def changed_coords(old: Any, new: Any) -> tuple[int, ...]:
    """Indices of coordinates where two states differ.

    Opaque (non-tuple) elements are treated as a single coordinate 0.
    """
    if isinstance(old, tuple) and isinstance(new, tuple) and len(old) == len(new):
        return tuple(i for i, (x, y) in enumerate(zip(old, new)) if x != y)
    return () if old == new else (0,)
