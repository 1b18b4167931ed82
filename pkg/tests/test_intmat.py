import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from germext.errors import MatrixFormatError, ShapeError
from germext.intmat import (
    IntMatrix,
    det,
    determinantal_divisor,
    determinantal_divisors,
    elementary,
    format_matrix,
    hnf,
    identity,
    is_surjective,
    is_unimodular,
    parse_matrix,
    snf,
    transpose,
    zeros,
)

from oracles import cofactor_det, minor_divisors, random_unimodular


def matrices(max_rows=4, max_cols=4, lo=-9, hi=9, min_dim=0):
    return st.integers(min_dim, max_rows).flatmap(
        lambda r: st.integers(min_dim, max_cols).flatmap(
            lambda c: st.lists(st.lists(st.integers(lo, hi), min_size=c, max_size=c),
                               min_size=r, max_size=r).map(lambda rows: IntMatrix(rows, cols=c))))


def square(max_n=4, lo=-9, hi=9):
    return st.integers(0, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(lo, hi), min_size=n, max_size=n),
                           min_size=n, max_size=n).map(lambda rows: IntMatrix(rows, cols=n)))


# det

def test_det_examples():
    assert det(IntMatrix([[7, 5], [-3, -2]])) == 1
    assert det(identity(3)) == 1
    assert det(IntMatrix([[2, 4], [6, 8]])) == -8
    assert det(zeros(0, 0)) == 1


def test_det_rejects_rectangular():
    with pytest.raises(ShapeError):
        det(IntMatrix([[1, 2]]))


@given(square())
def test_det_matches_cofactor_oracle(M):
    assert det(M) == cofactor_det(M.to_list())


# hnf

def test_hnf_examples():
    r = hnf(IntMatrix([[3]]))
    assert r.H == IntMatrix([[3]]) and r.U == IntMatrix([[1]])
    r = hnf(IntMatrix([[0, 1], [1, 0]]))
    assert IntMatrix([[0, 1], [1, 0]]) @ r.U == r.H
    assert r.H == identity(2)
    assert hnf(identity(3)).H == identity(3)
    assert hnf(identity(3)).U == identity(3)


def test_hnf_tall_matrix_rejected():
    with pytest.raises(ShapeError):
        hnf(IntMatrix([[1], [2]]))


@given(matrices(max_rows=4, max_cols=5))
def test_hnf_postconditions(B):
    if B.rows > B.cols:
        return
    r = hnf(B)
    assert B @ r.U == r.H
    assert det(r.U) in (1, -1)
    off = r.H.cols - r.H.rows
    assert all(r.H[i, j] == 0 for i in range(r.H.rows) for j in range(off + i))


# snf and divisors

def test_snf_examples():
    r = snf(IntMatrix([[2, 4], [6, 8]]))
    assert r.S == IntMatrix([[2, 0], [0, 4]])
    z = snf(zeros(2, 3))
    assert z.S == zeros(2, 3) and z.U == identity(2) and z.V == identity(3)
    assert snf(IntMatrix([[7, 5], [-3, -2]])).S == identity(2)


def test_determinantal_divisor_examples():
    assert determinantal_divisors(IntMatrix([[7, 5], [-3, -2]])) == [1, 1, 1]
    assert determinantal_divisors(IntMatrix([[5]])) == [1, 5]
    assert determinantal_divisors(zeros(2, 2)) == [1, 0, 0]
    assert determinantal_divisor(IntMatrix([[5]]), 3) == 0
    assert determinantal_divisors(zeros(0, 3)) == [1]


def test_surjectivity_examples():
    assert is_surjective(IntMatrix([[7, 5], [-3, -2]]))
    assert not is_surjective(IntMatrix([[2, 0], [0, 2]]))
    assert is_surjective(IntMatrix([[1, 0, 9], [0, 1, 4]]))


def test_plumbing_examples():
    assert is_unimodular(IntMatrix([[7, 5], [-3, -2]]))
    assert not is_unimodular(IntMatrix([[1, 2]]))
    assert elementary(2, 2, 1, 1) == IntMatrix([[1, 0], [1, 1]])
    with pytest.raises(ValueError):
        elementary(2, 1, 1, 1)
    with pytest.raises(ShapeError):
        IntMatrix([[1, 2]]) @ IntMatrix([[1, 2]])
    with pytest.raises(ShapeError):
        IntMatrix([[1, 2]]) + IntMatrix([[1], [2]])


@given(matrices())
def test_transpose_involution(M):
    assert transpose(transpose(M)) == M
    assert M.T.shape == (M.cols, M.rows)


@settings(max_examples=150)
@given(matrices(max_rows=4, max_cols=4))
def test_snf_postconditions(M):
    r = snf(M)
    assert r.U @ M @ r.V == r.S
    assert det(r.U) in (1, -1) and det(r.V) in (1, -1)
    s = r.elementary_divisors
    assert all(x >= 0 for x in s)
    assert all(s[i + 1] % s[i] == 0 if s[i] else s[i + 1] == 0 for i in range(len(s) - 1))
    assert all(r.S[i, j] == 0 for i in range(M.rows) for j in range(M.cols) if i != j)
    d = r.determinantal_divisors
    assert all(s[k - 1] * d[k - 1] == d[k] for k in range(1, len(d)) if d[k - 1])


@settings(max_examples=60)
@given(matrices(max_rows=3, max_cols=3, lo=-6, hi=6))
def test_divisors_match_minor_oracle(M):
    assert determinantal_divisors(M) == minor_divisors(M.to_list(), M.rows, M.cols)


@settings(max_examples=60)
@given(matrices(max_rows=4, max_cols=4, min_dim=1), st.integers(0, 10**6))
def test_divisors_invariant_under_sandwich(M, seed):
    rng = random.Random(seed)
    P, Q = random_unimodular(rng, M.rows), random_unimodular(rng, M.cols)
    assert determinantal_divisors(P @ M @ Q) == determinantal_divisors(M)


# text format

def test_matrix_text_round_trip():
    M = IntMatrix([[1, -2, 3], [40000000000000000000000, 0, -7]])
    assert parse_matrix(format_matrix(M)) == M
    assert parse_matrix("0 3\n") == zeros(0, 3)


@pytest.mark.parametrize("text,line", [
    ("", 1),
    ("2\n1 2\n", 1),
    ("1 2\n1 x\n", 2),
    ("2 2\n1 2\n3\n", 3),
])
def test_matrix_format_errors_carry_lines(text, line):
    with pytest.raises(MatrixFormatError) as exc:
        parse_matrix(text)
    assert exc.value.line == line
