from fractions import Fraction

import pytest

from app.lib.exceptions import SingularMatrixError
from app.lib.linalg import EchelonForm, axpy, inverse_matrix, is_invertible, rank
from tests.oracles import dense_rank

def test_axpy_drops_zeros(qq):
    """Test for in-place target -= factor * source"""
    target = {0: Fraction(2), 1: Fraction(1)}
    axpy(qq, target, 2, {0: Fraction(1), 2: Fraction(1)})
    assert target == {1: 1, 2: -2}

def test_rank_against_dense(qq):
    """Test the echelon rank against plain elimination"""
    rows = [{0: 1, 1: 2}, {1: 1, 2: 1}, {0: 1, 1: 3, 2: 1}, {2: 5}]
    assert rank(qq, rows) == dense_rank(rows, 3) == 3

def test_rank_depends_on_field(qq, f3):
    """Test that a determinant of 3 vanishes over F3"""
    rows = [{0: 1, 1: 1}, {0: 1, 1: 4}]
    assert rank(qq, rows) == 2
    assert rank(f3, rows) == 1

def test_insert_returns_relation(qq):
    """Test that a dependent insert reports its relation"""
    echelon = EchelonForm(qq)
    assert echelon.insert({0: 1, 1: 1}, {"a": 1}) is None
    assert echelon.insert({1: 1}, {"b": 1}) is None
    relation = echelon.insert({0: 2, 1: 3}, {"c": 1})
    assert relation == {"c": 1, "a": -2, "b": -1}
    assert echelon.contains({0: 5})
    assert echelon.rank == 2

def test_inverse_matrix(qq, f5):
    """Test for Gauss-Jordan inverses"""
    assert inverse_matrix(qq, [[2, 1], [1, 1]]) == [[1, -1], [-1, 2]]
    assert inverse_matrix(f5, [[2, 0], [0, 1]]) == [[3, 0], [0, 1]]
    assert is_invertible(qq, [[0, 1], [1, 0]])
    with pytest.raises(SingularMatrixError):
        inverse_matrix(qq, [[1, 2], [2, 4]])
