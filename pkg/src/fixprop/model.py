"""Finite-domain CSPs and binary-relation algebra.

A :class:`Csp` holds named variables, one finite domain per variable, and
constraints given extensionally as tuple sets over strictly increasing
variable indices.  Values are opaque atoms with a total order (integers in
all shipped front ends).  A :class:`NormalizedCsp` is the binary special
case with exactly one constraint per variable pair, the form the
path-consistency algorithms operate on.

Binary relations are plain frozensets of value pairs; :func:`transpose` and
:func:`compose` give the usual relation algebra:

    compose(R, S) = {(a, b) | exists c: (a, c) in R and (c, b) in S}
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

from .errors import StructuralError, UnsupportedInputError
from .orders import Scheme

Relation = frozenset  # frozenset[tuple[value, value]]


def transpose(pairs: Iterable[tuple]) -> Relation:
    """The relation with every pair flipped."""
    return frozenset((b, a) for a, b in pairs)


def compose(r: Iterable[tuple], s: Iterable[tuple]) -> Relation:
    """Relational composition: pairs (a, b) joined through a middle value."""
    by_first: dict = {}
    for c, b in s:
        by_first.setdefault(c, []).append(b)
    out = set()
    for a, c in r:
        for b in by_first.get(c, ()):
            out.add((a, b))
    return frozenset(out)


@dataclass(frozen=True)
class Constraint:
    """An extensional constraint on a scheme of variable indices.

    Tuples are stored as a frozenset; a sorted copy is kept for the kernels
    so repeated propagator applications do not re-sort.
    """

    scheme: Scheme
    tuples: frozenset
    name: str = ""
    tuples_sorted: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        tps = frozenset(tuple(t) for t in self.tuples)
        k = len(self.scheme)
        for t in tps:
            if len(t) != k:
                raise StructuralError(
                    f"constraint {self.name or self.scheme}: tuple {t} does not "
                    f"match scheme arity {k}"
                )
        object.__setattr__(self, "tuples", tps)
        object.__setattr__(self, "tuples_sorted", tuple(sorted(tps)))

    @property
    def arity(self) -> int:
        return len(self.scheme)

    @classmethod
    def on(cls, indices: Sequence[int], tuples: Iterable[tuple], name: str = "") -> "Constraint":
        """Build a constraint from indices in any order.

        Indices must be distinct.  The scheme is put into increasing order
        and every tuple is permuted accordingly, so a constraint declared on
        (y, x) folds into its transpose on (x, y).
        """
        idx = tuple(indices)
        if len(set(idx)) != len(idx):
            raise StructuralError(f"constraint {name or idx}: repeated variable in scheme")
        order = sorted(range(len(idx)), key=idx.__getitem__)
        sorted_idx = tuple(idx[o] for o in order)
        permuted = set()
        for t in tuples:
            t = tuple(t)
            if len(t) != len(idx):
                raise StructuralError(
                    f"constraint {name or idx}: tuple {t} does not match "
                    f"scheme arity {len(idx)}"
                )
            permuted.add(tuple(t[o] for o in order))
        return cls(Scheme(sorted_idx), frozenset(permuted), name)


@dataclass(frozen=True)
class Csp:
    """Variables, domains and constraints, all in a fixed declaration order."""

    variables: tuple[str, ...]
    domains: tuple[frozenset, ...]
    constraints: tuple[Constraint, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "domains", tuple(frozenset(d) for d in self.domains))
        object.__setattr__(self, "constraints", tuple(self.constraints))
        if len(self.variables) != len(self.domains):
            raise StructuralError(
                f"{len(self.variables)} variables but {len(self.domains)} domains"
            )
        if len(set(self.variables)) != len(self.variables):
            raise StructuralError("duplicate variable names")
        named = [c.name for c in self.constraints if c.name]
        if len(set(named)) != len(named):
            raise StructuralError("duplicate constraint names")
        n = len(self.variables)
        for c in self.constraints:
            c.scheme.check_arity(n)
            for t in c.tuples:
                for i, v in zip(c.scheme, t):
                    if v not in self.domains[i]:
                        raise StructuralError(
                            f"constraint {c.name or c.scheme}: value {v!r} not in "
                            f"domain of {self.variables[i]}"
                        )

    def var_index(self, name: str) -> int:
        try:
            return self.variables.index(name)
        except ValueError:
            raise StructuralError(f"unknown variable {name!r}") from None

    def constraint_name(self, i: int) -> str:
        return self.constraints[i].name or f"c{i}"

    def is_binary(self) -> bool:
        return all(c.arity == 2 for c in self.constraints)

    def with_domains(self, domains: Sequence[frozenset]) -> "Csp":
        """The same CSP with reduced domains; constraints are restricted to them."""
        doms = tuple(frozenset(d) for d in domains)
        if len(doms) != len(self.domains):
            raise StructuralError("domain count mismatch")
        for old, new in zip(self.domains, doms):
            if not new <= old:
                raise StructuralError("with_domains may only shrink domains")
        cons = tuple(
            replace(
                c,
                tuples=frozenset(
                    t for t in c.tuples if all(v in doms[i] for i, v in zip(c.scheme, t))
                ),
            )
            for c in self.constraints
        )
        return replace(self, domains=doms, constraints=cons)


@dataclass(frozen=True)
class NormalizedCsp(Csp):
    """A binary CSP with exactly one constraint per variable pair i < j,
    stored in lexicographic pair order."""

    def __post_init__(self) -> None:
        super().__post_init__()
        n = len(self.variables)
        expected = list(itertools.combinations(range(n), 2))
        schemes = [tuple(c.scheme.indices) for c in self.constraints]
        if schemes != expected:
            raise StructuralError(
                "normalized CSP needs exactly one binary constraint per variable "
                "pair, in lexicographic pair order"
            )

    def pair_pos(self, i: int, j: int) -> int:
        """Position of the pair constraint on coordinates (i, j), i < j."""
        n = len(self.variables)
        if not 0 <= i < j < n:
            raise StructuralError(f"not a variable pair: ({i}, {j})")
        # pairs (0,1), (0,2), ..., (0,n-1), (1,2), ... in order
        return i * n - i * (i + 1) // 2 + (j - i - 1)

    def relation(self, i: int, j: int) -> Relation:
        return self.constraints[self.pair_pos(i, j)].tuples

    def with_relations(self, relations: Sequence[frozenset]) -> "NormalizedCsp":
        """The same normalized CSP with each pair relation replaced (only shrinking)."""
        if len(relations) != len(self.constraints):
            raise StructuralError("relation count mismatch")
        cons = []
        for c, rel in zip(self.constraints, relations):
            rel = frozenset(rel)
            if not rel <= c.tuples:
                raise StructuralError("with_relations may only shrink relations")
            cons.append(replace(c, tuples=rel))
        return replace(self, constraints=tuple(cons))


def normalize(p: Csp) -> NormalizedCsp:
    """Fold a binary CSP into one constraint per variable pair.

    For each pair x before y the relation is the full product of the two
    domains intersected with every given constraint on that pair.  Absent
    pairs therefore get the universal relation.  Solutions are preserved.
    """
    for c in p.constraints:
        if c.arity != 2:
            raise UnsupportedInputError(
                f"normalize requires binary constraints; {c.name or c.scheme} "
                f"has arity {c.arity}"
            )
    by_pair: dict[tuple[int, ...], frozenset] = {}
    for c in p.constraints:
        pair = tuple(c.scheme.indices)
        if pair in by_pair:
            by_pair[pair] &= c.tuples
        else:
            by_pair[pair] = c.tuples
    cons = []
    n = len(p.variables)
    for i, j in itertools.combinations(range(n), 2):
        rel = frozenset(itertools.product(p.domains[i], p.domains[j]))
        if (i, j) in by_pair:
            rel &= by_pair[(i, j)]
        cons.append(
            Constraint(Scheme((i, j)), rel, name=f"{p.variables[i]}_{p.variables[j]}")
        )
    return NormalizedCsp(p.variables, p.domains, tuple(cons))


def reorder(p: Csp, order: Sequence[str]) -> Csp:
    """Permute the variables to the given name order.

    Constraint schemes are rewritten to be increasing in the new order, with
    tuples permuted to match, so the result is the same problem presented
    along a different variable sequence.
    """
    order = tuple(order)
    if sorted(order) != sorted(p.variables):
        raise StructuralError(
            f"order {order!r} is not a permutation of the declared variables"
        )
    new_pos = {name: k for k, name in enumerate(order)}
    perm = tuple(new_pos[name] for name in p.variables)  # old index -> new index
    domains = [None] * len(order)
    for old_i, dom in enumerate(p.domains):
        domains[perm[old_i]] = dom
    cons = tuple(
        Constraint.on(tuple(perm[i] for i in c.scheme), c.tuples, c.name)
        for c in p.constraints
    )
    if isinstance(p, NormalizedCsp):
        cons = tuple(sorted(cons, key=lambda c: c.scheme.indices))
        return NormalizedCsp(order, tuple(domains), cons)
    return Csp(order, tuple(domains), cons)
