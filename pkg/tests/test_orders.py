import pytest
from hypothesis import given
from hypothesis import strategies as st

from fixprop.errors import StructuralError
from fixprop.orders import Scheme, changed_coords, lift, slice_state, state_leq

sets = st.frozensets(st.integers(0, 5), max_size=5)
states = st.tuples(sets, sets, sets)


class TestScheme:
    def test_accepts_strictly_increasing(self):
        s = Scheme((0, 2, 5))
        assert len(s) == 3
        assert list(s) == [0, 2, 5]
        assert 2 in s and 1 not in s

    @pytest.mark.parametrize("bad", [(), (2, 1), (1, 1), (-1, 0), (0, 0, 1)])
    def test_rejects_bad_indices(self, bad):
        with pytest.raises(StructuralError):
            Scheme(bad)

    def test_check_arity(self):
        Scheme((0, 3)).check_arity(4)
        with pytest.raises(StructuralError):
            Scheme((0, 3)).check_arity(3)

    def test_str_is_one_based(self):
        assert str(Scheme((0, 2))) == "(1,3)"


def test_slice_state_picks_scheme_coords():
    state = (frozenset({1}), frozenset({2}), frozenset({3}))
    assert slice_state(state, Scheme((0, 2))) == (frozenset({1}), frozenset({3}))


def test_lift_rewrites_slice_only():
    def drop_left(piece):
        return (frozenset(), piece[1])

    lifted = lift(drop_left, Scheme((0, 2)), 3)
    state = (frozenset({1}), frozenset({2}), frozenset({3}))
    assert lifted(state) == (frozenset(), frozenset({2}), frozenset({3}))


def test_lift_rejects_wrong_widths():
    lifted = lift(lambda piece: piece, Scheme((0, 1)), 2)
    with pytest.raises(StructuralError):
        lifted((frozenset(),))
    bad = lift(lambda piece: piece[:1], Scheme((0, 1)), 2)
    with pytest.raises(StructuralError):
        bad((frozenset(), frozenset()))


class TestStateLeq:
    def test_reversed_inclusion(self):
        a = (frozenset({1, 2}), frozenset({3}))
        b = (frozenset({1}), frozenset({3}))
        assert state_leq(a, b)
        assert not state_leq(b, a)

    def test_incomparable_widths(self):
        with pytest.raises(StructuralError):
            state_leq((frozenset(),), (frozenset(), frozenset()))

    @given(states)
    def test_reflexive(self, s):
        assert state_leq(s, s)

    @given(states, states, states)
    def test_transitive(self, a, b, c):
        if state_leq(a, b) and state_leq(b, c):
            assert state_leq(a, c)

    @given(states, states)
    def test_antisymmetric(self, a, b):
        if state_leq(a, b) and state_leq(b, a):
            assert a == b

    @given(states)
    def test_full_sets_are_least(self, s):
        bottom = tuple(frozenset(range(6)) for _ in s)
        assert state_leq(bottom, s)


def test_changed_coords_on_tuples():
    old = (frozenset({1}), frozenset({2}), frozenset({3}))
    new = (frozenset({1}), frozenset(), frozenset({3}))
    assert changed_coords(old, new) == (1,)
    assert changed_coords(old, old) == ()


def test_changed_coords_on_opaque_elements():
    assert changed_coords(5, 5) == ()
    assert changed_coords(5, 6) == (0,)
