"""Unimodularity verdicts: worked examples, route agreement, invariances."""

import math
import random

import sympy
import pytest
from hypothesis import given, settings, strategies as st

from okdens.errors import BadShape, DegreeMismatch
from okdens.unimodular import (INFINITE, MatrixOK, is_unimodular,
                               is_unimodular_modp, matrix_from_json,
                               matrix_to_json, minors)


def _mk(field, rows):
    return MatrixOK.from_rows(field, rows)


def matrices(field, n, m, lo=-4, hi=3):
    k = field.degree
    entry = st.tuples(*[st.integers(min_value=lo, max_value=hi)] * k)
    row = st.tuples(*[entry] * m)
    return st.tuples(*[row] * n)


def test_worked_examples(field_q, field_sqrt2):
    rep = is_unimodular(_mk(field_sqrt2, [[(0, 1), (2, 1)]]))
    assert rep.verdict is False
    assert rep.index == 2
    assert rep.witness is not None and rep.witness[0] == 2
    assert rep.witness[1].coeffs == (0, 1)

    rep2 = is_unimodular(_mk(field_q, [[(2,), (4,)]]))
    assert (rep2.verdict, rep2.index) == (False, 2)

    rep3 = is_unimodular(_mk(field_q, [[(1,), (0,), (0,)], [(0,), (1,), (0,)]]))
    assert rep3.verdict is True and rep3.index == 1 and rep3.witness is None


def test_zero_rows_give_infinite_index(field_q, field_cubic):
    rep = is_unimodular(_mk(field_q, [[(0,), (0,)]]))
    assert rep.verdict is False
    assert rep.index is INFINITE
    assert repr(rep.index) == "Infinite"
    assert rep.to_json_dict()["index"] == "infinite"
    z = field_cubic.zero()
    repm = is_unimodular_modp(_mk(field_cubic, [[z, z, z]]))
    assert repm.verdict is False and repm.witness is None


def test_shape_validation(field_q, field_sqrt2):
    tall = _mk(field_q, [[(1,), (0,)], [(0,), (1,)], [(1,), (1,)]])  # n > m
    with pytest.raises(BadShape):
        is_unimodular(tall)
    with pytest.raises(BadShape):
        minors(tall)
    with pytest.raises(DegreeMismatch):
        _mk(field_sqrt2, [[(1,), (0, 1)]])
    with pytest.raises(BadShape):
        is_unimodular_modp(_mk(field_q, [[(1,), (0,)], [(0,), (1,)]]))  # needs n < m


def test_square_matrices_allowed_in_hnf_route(field_q):
    rep = is_unimodular(_mk(field_q, [[(2,), (0,)], [(0,), (2,)]]))
    assert rep.verdict is False and rep.index == 4
    rep1 = is_unimodular(_mk(field_q, [[(1,), (7,)], [(0,), (1,)]]))
    assert rep1.verdict is True


def test_minors_example(field_q):
    mat = _mk(field_q, [[(1,), (2,), (3,)], [(4,), (5,), (6,)]])
    assert minors(mat) == [(-3,), (-6,), (-3,)]


def _gcd_minors_oracle(rows_int, n, m):
    """k = 1 oracle: gcd of all n x n minors of an integer matrix."""
    M = sympy.Matrix(rows_int)
    g = 0
    for cols in __import__("itertools").combinations(range(m), n):
        g = math.gcd(g, int(M[:, cols].det()))
    return g


@pytest.mark.parametrize("n,m", [(1, 2), (1, 3), (2, 3), (2, 4), (3, 4)])
def test_k1_routes_match_gcd_oracle(n, m, field_q):
    rng = random.Random(1234 + n * 10 + m)
    for _ in range(120):
        rows = [[(rng.randint(-5, 4),) for _ in range(m)] for _ in range(n)]
        mat = _mk(field_q, rows)
        g = _gcd_minors_oracle([[e[0] for e in r] for r in rows], n, m)
        want = g == 1
        rep = is_unimodular(mat)
        repm = is_unimodular_modp(mat, with_index=True)
        assert rep.verdict is want
        assert repm.verdict is want
        if g > 1:
            assert rep.index is INFINITE or rep.index % rep.witness[0] == 0


@pytest.mark.parametrize("fname,n,m", [
    ("Q(sqrt2)", 1, 2), ("Q(sqrt2)", 2, 3), ("Q(sqrt2)", 2, 4),
    ("x^3+x+1", 1, 2), ("x^3+x+1", 2, 3),
    ("x^5-13x-7", 1, 2),
])
def test_route_agreement(fname, n, m, all_fields):
    field = all_fields[fname]

    @given(matrices(field, n, m))
    @settings(max_examples=120, deadline=None)
    def check(rows):
        mat = _mk(field, rows)
        rep = is_unimodular(mat)
        repm = is_unimodular_modp(mat, with_index=True)
        assert rep.verdict == repm.verdict
        assert rep.index == repm.index
        if not rep.verdict and rep.index is not INFINITE:
            assert rep.witness is not None
            assert repm.witness is not None

    check()


def _row_op(field, rows, i, j, c):
    """rows[j] += c * rows[i] over the field; returns a new row list."""
    out = [list(r) for r in rows]
    out[j] = [field.add(e_j, field.mul(c, e_i))
              for e_i, e_j in zip(out[i], out[j])]
    return out


@pytest.mark.parametrize("fname", ["Q", "Q(sqrt2)", "x^3+x+1"])
def test_gl_invariance(fname, all_fields):
    field = all_fields[fname]
    k = field.degree
    rng = random.Random(77)
    for _ in range(40):
        n, m = 2, 3
        rows = [[tuple(rng.randint(-3, 3) for _ in range(k)) for _ in range(m)]
                for _ in range(n)]
        before = is_unimodular(_mk(field, rows))
        # apply a handful of unimodular row operations
        for _ in range(6):
            i, j = rng.sample(range(n), 2)
            c = tuple(rng.randint(-2, 2) for _ in range(k))
            rows = _row_op(field, rows, i, j, c)
        after = is_unimodular(_mk(field, rows))
        assert before.verdict == after.verdict
        assert before.index == after.index


def test_witness_divides_index(field_sqrt2):
    rng = random.Random(5150)
    seen = 0
    for _ in range(300):
        rows = [[tuple(rng.randint(-4, 3) for _ in range(2)) for _ in range(3)]
                for _ in range(2)]
        rep = is_unimodular(_mk(field_sqrt2, rows))
        if rep.verdict or rep.index is INFINITE:
            continue
        seen += 1
        p, g = rep.witness
        assert rep.index % p == 0
        assert g.p == p
    assert seen > 10


def test_json_roundtrip(field_sqrt2):
    mat = _mk(field_sqrt2, [[(0, 1), (2, 1), (1, 0)]])
    obj = matrix_to_json(mat)
    assert obj["n"] == 1 and obj["m"] == 3
    back = matrix_from_json(obj)
    assert back.entries == mat.entries
    assert back.field.coeffs == mat.field.coeffs


def test_matrix_from_json_validates():
    with pytest.raises(BadShape):
        matrix_from_json({"field": [0, 1], "n": 2, "m": 2,
                          "entries": [[[1], [0]]]})


def test_report_json_shapes(field_q, field_sqrt2):
    rep = is_unimodular(_mk(field_sqrt2, [[(0, 1), (2, 1)]]))
    d = rep.to_json_dict()
    assert d["verdict"] is False
    assert d["index"] == 2
    assert d["witness"] == {"p": 2, "g": [0, 1]}
    assert d["method"] == "MinorIdealHNF"
    ok = is_unimodular(_mk(field_q, [[(1,), (0,)]])).to_json_dict()
    assert ok["witness"] is None and ok["index"] == 1


def test_modp_with_index_matches_hnf(field_cubic):
    rng = random.Random(4242)
    for _ in range(60):
        rows = [[tuple(rng.randint(-3, 3) for _ in range(3)) for _ in range(4)]
                for _ in range(2)]
        mat = _mk(field_cubic, rows)
        rep = is_unimodular(mat)
        repm = is_unimodular_modp(mat, with_index=True)
        assert rep.index == repm.index
