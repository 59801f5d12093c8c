import itertools

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conewalk.lattice import (
    LatticeError,
    LatticeSpace,
    bareiss_determinant,
    column_echelon,
    determinant,
    integer_kernel,
    is_even,
    lll_gram,
    matmul,
    matvec,
    orthogonal_complement,
    primitive,
    reflect_in_root,
    reflection_matrix,
    signature,
    solve_integral,
    transpose,
)

K3 = ((0, 1, 1), (1, -2, 0), (1, 0, -2))
EX63 = ((0, 2, 1, 1), (2, 0, 1, 1), (1, 1, -2, 0), (1, 1, 0, -2))

small = st.integers(-4, 4)


def sym_matrices(n):
    return st.lists(small, min_size=n * (n + 1) // 2, max_size=n * (n + 1) // 2).map(
        lambda xs: _sym(n, xs))


def _sym(n, xs):
    m = [[0] * n for _ in range(n)]
    it = iter(xs)
    for i in range(n):
        for j in range(i, n):
            m[i][j] = m[j][i] = next(it)
    return m


def test_constructor_validation():
    with pytest.raises(LatticeError, match="square"):
        LatticeSpace(((1, 0),))
    with pytest.raises(LatticeError, match="symmetric"):
        LatticeSpace(((1, 2), (0, 1)))
    with pytest.raises(LatticeError, match="degenerate"):
        LatticeSpace(((1, 1), (1, 1)))
    with pytest.raises(LatticeError, match="labels"):
        LatticeSpace(((1,),), ("a", "b"))


def test_pairing_length_checked():
    L = LatticeSpace(K3)
    with pytest.raises(LatticeError):
        L.pair((1, 0), (1, 0, 0))


def test_known_invariants():
    assert determinant(LatticeSpace(K3)) == 4
    assert determinant(LatticeSpace(EX63)) == -32
    assert tuple(signature(LatticeSpace(EX63))) == (1, 3)
    assert is_even(LatticeSpace(K3))
    assert not is_even(LatticeSpace(((1, 0), (0, -1))))


@settings(max_examples=150, deadline=None)
@given(st.integers(1, 5).flatmap(sym_matrices))
def test_determinant_and_signature_against_oracles(m):
    assert bareiss_determinant(m) == oracles.sympy_det(m)
    if oracles.sympy_det(m) != 0:
        assert tuple(signature(m)) == oracles.eigen_signature(m)


def test_signature_with_zero_diagonal():
    assert tuple(signature(((0, 1), (1, 0)))) == (1, 1)
    assert tuple(signature(((0, 1, 1), (1, 0, 1), (1, 1, 0)))) == (1, 2)


def test_reflection_is_involutive_isometry():
    L = LatticeSpace(K3)
    r = (4, 2, -1)
    R = reflection_matrix(L, r)
    assert matmul(R, R) == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
    assert matmul(matmul(transpose(R), L.gram), R) == L.gram
    x = (3, 2, 1)
    assert matvec(R, x) == reflect_in_root(L, r, x)
    assert reflect_in_root(L, r, r) == tuple(-c for c in r)
    with pytest.raises(LatticeError, match="not a root"):
        reflect_in_root(L, (1, 0, 0), x)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=3))
def test_integer_kernel(rows):
    ker = integer_kernel(rows, 4)
    assert len(ker) == 4 - sympy.Matrix(rows).rank()
    for v in ker:
        assert all(sum(a * b for a, b in zip(row, v)) == 0 for row in rows)
    if ker:
        # a saturated basis: the kernel vectors extend to a unimodular matrix
        assert sympy.Matrix(ker).rank() == len(ker)
        minors = sympy.Matrix(ker)
        g = 0
        for cols in itertools.combinations(range(4), len(ker)):
            g = sympy.igcd(g, minors[:, list(cols)].det())
        assert abs(g) == 1


def test_solve_integral():
    x, ker = solve_integral([[2, 4]], [6], 2)
    assert 2 * x[0] + 4 * x[1] == 6 and len(ker) == 1
    assert solve_integral([[2, 4]], [3], 2) is None


def test_column_echelon_unimodular():
    rows = [[4, 6, 2], [1, 0, 3]]
    E, U, piv = column_echelon(rows, 3)
    assert [list(r) for r in matmul(rows, U)] == [list(r) for r in E]
    assert abs(bareiss_determinant(U)) == 1


def test_orthogonal_complement():
    L = LatticeSpace(K3)
    basis, gram = orthogonal_complement(L, (1, 0, 0))
    assert len(basis) == 2
    for b in basis:
        assert L.pair(b, (1, 0, 0)) == 0
    # isotropic vector: the complement contains it, so the form is degenerate
    assert bareiss_determinant(gram) == 0
    with pytest.raises(LatticeError):
        orthogonal_complement(L, (0, 0, 0))


def test_lll_unimodular_and_reducing():
    q = [[101, 99], [99, 98]]
    T = lll_gram(q)
    assert abs(bareiss_determinant(T)) == 1
    red = matmul(matmul(transpose(T), q), T)
    assert red[0][0] <= 2


def test_primitive():
    assert primitive((4, -6, 2)) == (2, -3, 1)
    with pytest.raises(LatticeError):
        primitive((0, 0))
