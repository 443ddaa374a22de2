from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ringelhall.quiver import (
    BUILTIN_NAMES,
    QuiverError,
    ShapeError,
    builtin,
    cartan_matrix,
    defect,
    euler_form,
    load_quiver,
    parse_quiver,
    symmetric_form,
    tame_data,
)

TAME = [n for n in BUILTIN_NAMES if "~" in n]


def test_euler_examples():
    assert euler_form(builtin("A2"), (1, 0), (0, 1)) == -1
    assert euler_form(builtin("K"), (1, 0), (0, 1)) == -2
    assert euler_form(builtin("A~2,1"), (1, 1, 1), (1, 1, 1)) == 0


def test_euler_shape_error():
    with pytest.raises(ShapeError):
        euler_form(builtin("A2"), (1, 0, 0), (0, 1))


def test_cartan_examples():
    for name in BUILTIN_NAMES:
        C = cartan_matrix(builtin(name))
        assert all(C[i, i] == 2 for i in range(C.shape[0]))
    assert cartan_matrix(builtin("A2"))[0, 1] == -1
    assert cartan_matrix(builtin("K"))[0, 1] == -2


def test_defect_examples():
    # the sink of D~4 and of E~6
    D4 = builtin("D~4")
    sink = D4.sinks()[0]
    assert defect(D4, D4.unit(sink)) == -2
    E6 = builtin("E~6")
    assert defect(E6, E6.unit(E6.sinks()[0])) == -3
    for name in TAME:
        Q = builtin(name)
        assert defect(Q, tame_data(Q).delta) == 0


def test_defect_requires_tame():
    with pytest.raises(QuiverError):
        defect(builtin("A3"), (1, 0, 0))


def test_tame_table():
    assert tame_data(builtin("E~7")).periods == (2, 3, 4)
    assert tame_data(builtin("E~6")).periods == (2, 3, 3)
    assert tame_data(builtin("E~8")).periods == (2, 3, 5)
    assert tame_data(builtin("A~3,2")).periods == (3, 2)
    assert tame_data(builtin("A~2,1")).periods == (2,)


@pytest.mark.parametrize("name", TAME + ["A~3,2", "A~4,1", "D~5", "D~6"])
def test_tame_invariants(name):
    Q = builtin(name)
    td = tame_data(Q)
    assert td.ell <= 3
    assert sum(r - 1 for r in td.periods) == Q.n - 2
    for tube, r in zip(td.regular_simple_dims, td.periods):
        assert len(tube) == r
        assert tuple(map(sum, zip(*tube))) == td.delta
    for i in range(Q.n):
        assert symmetric_form(Q, td.delta, Q.unit(i)) == 0
    assert td.delta[td.extending_vertex] == 1


def test_d_tilde_delta_shape():
    for n in (4, 5, 6):
        Q = builtin(f"D~{n}")
        d = tame_data(Q).delta
        assert sorted(d) == [1] * 4 + [2] * (n - 3)


def test_not_extended_dynkin():
    with pytest.raises(QuiverError):
        tame_data(builtin("A3"))


def test_oriented_cycle_rejected():
    with pytest.raises(QuiverError):
        parse_quiver("vertices: 1 2\narrows: a:1->2 b:2->1")


def test_text_format_roundtrip():
    Q = parse_quiver("vertices: 1 2 3\narrows: a:1->2 b:2->3 c:1->3")
    assert load_quiver(Q.describe()) == Q
    assert euler_form(Q, (1, 0, 0), (0, 0, 1)) == -1


vec = st.lists(st.integers(0, 4), min_size=3, max_size=3).map(tuple)


@given(vec, vec, vec)
@settings(max_examples=60, deadline=None)
def test_euler_bilinear(a, b, c):
    Q = builtin("A~2,1")
    s = tuple(x + y for x, y in zip(a, b))
    assert euler_form(Q, s, c) == euler_form(Q, a, c) + euler_form(Q, b, c)
    assert symmetric_form(Q, a, c) == euler_form(Q, a, c) + euler_form(Q, c, a)


@given(st.sampled_from(["A3", "K", "A~2,1", "D~4", "E~6"]), st.data())
@settings(max_examples=30, deadline=None)
def test_cartan_orientation_independent(name, data):
    Q = builtin(name)
    i = data.draw(st.sampled_from(Q.sinks() + Q.sources()))
    R = Q.reversed_at(i)
    assert np.array_equal(cartan_matrix(Q), cartan_matrix(R))


@given(st.sampled_from(["A~2,1", "D~4", "E~6", "E~7", "E~8"]), st.data())
@settings(max_examples=30, deadline=None)
def test_delta_in_radical(name, data):
    Q = builtin(name)
    a = tuple(data.draw(st.lists(st.integers(-3, 3), min_size=Q.n, max_size=Q.n)))
    assert symmetric_form(Q, tame_data(Q).delta, a) == 0
