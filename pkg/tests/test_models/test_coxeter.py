import pytest

from app.lib.exceptions import NonFiniteCartanError, UnsupportedTypeError
from app.models.coxeter import CartanDatum, LiftingCheck, WeylElement

def test_cartan_from_label():
    """Test for the Cartan matrices of the supported types"""
    assert CartanDatum.from_label("a2").cartan_matrix == ((2, -1), (-1, 2))
    assert CartanDatum.from_label("B2").cartan_matrix == ((2, -1), (-2, 2))
    assert CartanDatum.from_label("C2").cartan_matrix == ((2, -2), (-1, 2))
    assert CartanDatum.from_label("G2").cartan_matrix == ((2, -3), (-1, 2))
    assert CartanDatum.from_label("D4").rank == 4

def test_unsupported_type():
    """Test that an unknown label is rejected"""
    with pytest.raises(UnsupportedTypeError):
        CartanDatum.from_label("E6")
    with pytest.raises(UnsupportedTypeError):
        CartanDatum.from_label("X")

def test_non_finite_matrix():
    """Test for the Cartan matrix validation"""
    with pytest.raises(NonFiniteCartanError):
        CartanDatum("bad", ((2, -1), (0, 2)))
    with pytest.raises(NonFiniteCartanError):
        CartanDatum("affine", ((2, -2), (-2, 2)))
    with pytest.raises(NonFiniteCartanError):
        CartanDatum("diag", ((1, 0), (0, 2)))
    with pytest.raises(NonFiniteCartanError):
        CartanDatum("empty", ())

def test_weyl_element_identity():
    """Test for equality and hashing of matrix elements"""
    s = WeylElement([[-1, 0], [1, 1]])
    assert s * s == WeylElement([[1, 0], [0, 1]])
    assert hash(s * s) == hash(WeylElement([[1, 0], [0, 1]]))
    assert s.act((1, 0)) == (-1, 1)
    assert s.column(1) == (0, 1)

def test_lifting_check_holds():
    """Test that every case must hold"""
    assert LiftingCheck(True, True, True).holds
    assert not LiftingCheck(True, False, True).holds
