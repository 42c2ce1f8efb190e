import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixprop.errors import StructuralError, UnsupportedInputError
from fixprop.model import Constraint, Csp, normalize, transpose
from fixprop.propagators import (
    ac3_comm_map,
    ac3_fns,
    arc_comm_map,
    comm_arc,
    comm_path,
    has_unique_pair_constraints,
    path_apply,
    path_comm_map,
    path_fns,
    project,
    project_binary,
    projection_fns,
)
from gencsp import e1, e4, random_csp, random_normalized, random_substate

values = st.integers(0, 3)
rels = st.frozensets(st.tuples(values, values), max_size=12)
sets = st.frozensets(values, max_size=4)


def fs(*xs):
    return frozenset(xs)


class TestProject:
    @given(
        st.frozensets(st.tuples(values, values, values), max_size=15),
        sets,
        sets,
        sets,
        st.integers(0, 2),
    )
    def test_matches_product_oracle(self, tuples, a, b, c, coord):
        con = Constraint.on((0, 1, 2), tuples)
        doms = (a, b, c)
        expected = frozenset(
            t[coord] for t in itertools.product(a, b, c) if t in con.tuples
        )
        out = project(con, coord, doms)
        assert out[coord] == expected
        assert all(out[k] == doms[k] for k in range(3) if k != coord)

    def test_validates_inputs(self):
        con = Constraint.on((0, 1), [(1, 2)])
        with pytest.raises(StructuralError):
            project(con, 0, (fs(1),))
        with pytest.raises(StructuralError):
            project(con, 2, (fs(1), fs(2)))

    def test_inflationary_monotone_idempotent(self):
        rng = random.Random(3)
        for _ in range(50):
            tuples = frozenset(
                (rng.randint(0, 3), rng.randint(0, 3)) for _ in range(rng.randint(0, 8))
            )
            con = Constraint.on((0, 1), tuples)
            big = random_substate(rng, (fs(0, 1, 2, 3), fs(0, 1, 2, 3)))
            small = random_substate(rng, big)
            coord = rng.randint(0, 1)
            out_big = project(con, coord, big)
            out_small = project(con, coord, small)
            # inflationary in the reversed-inclusion order: sets only shrink
            assert all(o <= d for o, d in zip(out_big, big))
            # monotone: smaller inputs give smaller outputs
            assert all(s <= b for s, b in zip(out_small, out_big))
            # idempotent
            assert project(con, coord, out_big) == out_big


class TestProjectBinary:
    @given(rels, sets, sets)
    def test_side1(self, rel, xs, ys):
        expected = frozenset(a for a in xs if any((a, b) in rel for b in ys))
        assert project_binary(tuple(rel), 1, xs, ys) == (expected, ys)

    @given(rels, sets, sets)
    def test_side2(self, rel, xs, ys):
        expected = frozenset(b for b in ys if any((a, b) in rel for a in xs))
        assert project_binary(tuple(rel), 2, xs, ys) == (xs, expected)

    def test_rejects_bad_side(self):
        with pytest.raises(StructuralError):
            project_binary((), 0, fs(), fs())


class TestPathApply:
    @given(rels, rels, rels)
    def test_xy_oracle(self, p, q, r):
        expected = frozenset(
            (a, b)
            for a, b in p
            if any((a, c) in q and (b, c) in r for c in range(4))
        )
        assert path_apply("xy", p, q, r) == (expected, q, r)

    @given(rels, rels, rels)
    def test_xz_oracle(self, p, q, r):
        expected = frozenset(
            (a, c)
            for a, c in q
            if any((a, b) in p and (b, c) in r for b in range(4))
        )
        assert path_apply("xz", p, q, r) == (p, expected, r)

    @given(rels, rels, rels)
    def test_yz_oracle(self, p, q, r):
        expected = frozenset(
            (b, c)
            for b, c in r
            if any((a, b) in p and (a, c) in q for a in range(4))
        )
        assert path_apply("yz", p, q, r) == (p, q, expected)

    def test_rejects_bad_target(self):
        with pytest.raises(StructuralError):
            path_apply("zz", fs(), fs(), fs())


class TestProjectionFns:
    def test_ids_schemes_and_flags(self):
        fns = projection_fns(e1())
        assert [f.id for f in fns] == ["pi1:lt", "pi2:lt"]
        assert all(f.idempotent for f in fns)
        assert all(f.scheme.indices == (0, 1) for f in fns)
        assert fns[0].tags["writes"] == 0
        assert fns[1].tags["writes"] == 1

    def test_binary_fast_path_matches_general(self):
        rng = random.Random(11)
        for _ in range(30):
            p = random_csp(rng)
            for fn in projection_fns(p):
                c = p.constraints[fn.tags["constraint"]]
                piece = random_substate(rng, tuple(p.domains[i] for i in c.scheme))
                got = fn.apply(piece)
                assert got == project(c, fn.tags["coord"], piece)

    def test_duplicate_labels_are_suffixed(self):
        p = Csp(
            ("x", "y"),
            (fs(1), fs(1)),
            (
                Constraint.on((0, 1), [(1, 1)], "c1"),
                Constraint.on((0, 1), [(1, 1)]),  # unnamed; defaults to c1
            ),
        )
        ids = [f.id for f in projection_fns(p)]
        assert len(set(ids)) == 4
        assert ids == ["pi1:c1#0", "pi2:c1#0", "pi1:c1#1", "pi2:c1#1"]

    def test_ternary_constraint_gets_three_fns(self):
        p = Csp(
            ("x", "y", "z"),
            (fs(0, 1), fs(0, 1), fs(0, 1)),
            (Constraint.on((0, 1, 2), [(0, 0, 0), (1, 1, 0)], "t"),),
        )
        fns = projection_fns(p)
        assert [f.id for f in fns] == ["pi1:t", "pi2:t", "pi3:t"]
        out = fns[2].apply((fs(0, 1), fs(0, 1), fs(0, 1)))
        assert out == (fs(0, 1), fs(0, 1), fs(0))


class TestCommArc:
    def test_same_constraint_and_same_writer(self):
        p = Csp(
            ("x", "y", "z"),
            (fs(0), fs(0), fs(0)),
            (
                Constraint.on((0, 1), [(0, 0)], "a"),
                Constraint.on((0, 2), [(0, 0)], "b"),
            ),
        )
        fns = projection_fns(p)
        by_id = {f.id: f for f in fns}
        # pi1:a writes x; partners: its sibling pi2:a, and pi1:b (also writes x)
        assert comm_arc(by_id["pi1:a"], fns) == fs("pi2:a", "pi1:b")
        # pi2:b writes z; only its sibling shares constraint, nobody else writes z
        assert comm_arc(by_id["pi2:b"], fns) == fs("pi1:b")
        cm = arc_comm_map(fns)
        assert set(cm) == set(by_id)
        assert cm["pi2:a"] == fs("pi1:a")  # pi2:a writes y, alone

    def test_declared_partners_commute(self):
        rng = random.Random(23)
        for _ in range(40):
            p = random_csp(rng)
            fns = projection_fns(p)
            by_id = {f.id: f for f in fns}
            cm = arc_comm_map(fns)
            state = random_substate(rng, p.domains)
            n = len(p.domains)
            from fixprop.engine import ground

            for fid, partners in cm.items():
                f = ground(by_id[fid], n)
                for gid in partners:
                    g = ground(by_id[gid], n)
                    assert f.apply(g.apply(state)) == g.apply(f.apply(state))


class TestAc3Family:
    def test_ids_and_tags(self):
        fns = ac3_fns(e1())
        assert [f.id for f in fns] == ["pi1:lt", "pi1:lt^T"]
        plain, twin = fns
        assert plain.tags["writes"] == 0 and plain.tags["reads"] == 1
        assert twin.tags["writes"] == 1 and twin.tags["reads"] == 0

    def test_twin_equals_transposed_projection(self):
        rng = random.Random(5)
        p = e1()
        fns = ac3_fns(p)
        rel = p.constraints[0].tuples
        for _ in range(20):
            piece = random_substate(rng, p.domains)
            got = fns[1].apply(piece)
            kept = frozenset(
                b for b in piece[1] if any((b, a) in transpose(rel) for a in piece[0])
            )
            assert got == (piece[0], kept)

    def test_rejects_non_binary(self):
        p = Csp(
            ("x", "y", "z"),
            (fs(0), fs(0), fs(0)),
            (Constraint.on((0, 1, 2), [(0, 0, 0)], "t"),),
        )
        with pytest.raises(UnsupportedInputError):
            ac3_fns(p)

    def test_comm_map_with_unique_pairs_includes_twin(self):
        p = Csp(
            ("x", "y", "z"),
            (fs(0), fs(0), fs(0)),
            (
                Constraint.on((0, 1), [(0, 0)], "a"),
                Constraint.on((0, 2), [(0, 0)], "b"),
            ),
        )
        fns = ac3_fns(p)
        assert has_unique_pair_constraints(p)
        cm = ac3_comm_map(fns, unique_pairs=True)
        # pi1:a writes x reading y; partners: its twin, and pi1:b (writes x reading z)
        assert cm["pi1:a"] == fs("pi1:a^T", "pi1:b")
        # pi1:a^T writes y reading x; nobody else writes y
        assert cm["pi1:a^T"] == fs("pi1:a")

    def test_comm_map_without_unique_pairs_drops_twin(self):
        p = Csp(
            ("x", "y"),
            (fs(0, 1), fs(0, 1)),
            (
                Constraint.on((0, 1), [(0, 0), (1, 1)], "a"),
                Constraint.on((0, 1), [(0, 0), (1, 0)], "b"),
            ),
        )
        assert not has_unique_pair_constraints(p)
        fns = ac3_fns(p)
        cm = ac3_comm_map(fns, unique_pairs=False)
        assert cm["pi1:a"] == fs()
        assert cm["pi1:a^T"] == fs()

    def test_twin_pair_genuinely_fails_to_commute_with_two_constraints(self):
        # two different relations on one pair: the constraint's own filter
        # and its transpose no longer commute on every state
        p = Csp(
            ("x", "y"),
            (fs(0, 1), fs(0, 1)),
            (
                Constraint.on((0, 1), [(0, 0), (1, 1)], "a"),
                Constraint.on((0, 1), [(0, 1)], "b"),
            ),
        )
        fns = ac3_fns(p)
        by_id = {f.id: f for f in fns}
        from fixprop.engine import ground

        f = ground(by_id["pi1:a"], 2)
        g = ground(by_id["pi1:b^T"], 2)
        state = (fs(0, 1), fs(0, 1))
        assert f.apply(g.apply(state)) != g.apply(f.apply(state))


class TestPathFamily:
    def test_three_fns_per_triple_in_order(self):
        np = normalize(e4())
        fns = path_fns(np)
        assert [f.id for f in fns] == ["f:x,y^z", "f:x,z^y", "f:y,z^x"]
        schemes = {f.id: f.scheme.indices for f in fns}
        # all three share the triple's coordinates (positions of xy, xz, yz)
        assert set(schemes.values()) == {(0, 1, 2)}

    def test_scheme_positions_match_pair_pos(self):
        rng = random.Random(9)
        np = random_normalized(rng, min_vars=4, max_vars=4)
        for fn in path_fns(np):
            i, j, k = fn.tags["triple"]
            assert fn.scheme.indices == (
                np.pair_pos(i, j),
                np.pair_pos(i, k),
                np.pair_pos(j, k),
            )

    def test_comm_path_has_m_minus_3_partners(self):
        rng = random.Random(13)
        for m in range(3, 7):
            np = random_normalized(rng, min_vars=m, max_vars=m)
            fns = path_fns(np)
            cm = path_comm_map(fns, np.variables)
            for fn in fns:
                assert len(cm[fn.id]) == m - 3
                assert comm_path(fn, np.variables) == cm[fn.id]

    def test_partners_write_same_pair_by_other_variable(self):
        rng = random.Random(17)
        np = random_normalized(rng, min_vars=5, max_vars=5)
        fns = path_fns(np)
        by_id = {f.id: f for f in fns}
        cm = path_comm_map(fns, np.variables)
        for fid, partners in cm.items():
            f = by_id[fid]
            for gid in partners:
                g = by_id[gid]
                assert g.tags["pair"] == f.tags["pair"]
                assert g.tags["via"] != f.tags["via"]

    def test_declared_partners_commute(self):
        rng = random.Random(29)
        from fixprop.engine import ground

        for _ in range(10):
            np = random_normalized(rng, min_vars=4, max_vars=5, min_dom=2, max_dom=3)
            fns = path_fns(np)
            by_id = {f.id: f for f in fns}
            cm = path_comm_map(fns, np.variables)
            arity = len(np.constraints)
            bottoms = tuple(c.tuples for c in np.constraints)
            for _ in range(5):
                state = random_substate(rng, bottoms)
                for fid, partners in cm.items():
                    f = ground(by_id[fid], arity)
                    for gid in partners:
                        g = ground(by_id[gid], arity)
                        assert f.apply(g.apply(state)) == g.apply(f.apply(state))
