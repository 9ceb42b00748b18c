import pytest

from app.lib.exceptions import PreconditionError
from app.models.ring import Polynomial
from app.models.sheaf import StalkPresentation, StructureAlgebraElement

def test_stalk_presentation():
    """Test for sorted even generator degrees"""
    assert StalkPresentation((0, 2, 2)).rank == 3
    assert StalkPresentation(()).rank == 0
    with pytest.raises(PreconditionError):
        StalkPresentation((1,))
    with pytest.raises(PreconditionError):
        StalkPresentation((2, 0))
    with pytest.raises(PreconditionError):
        StalkPresentation((-2,))

def test_structure_element_degree(qq):
    """Test for the degree of a homogeneous tuple"""
    x1 = Polynomial.variable(qq, 2, 0)
    element = StructureAlgebraElement({"a": x1, "b": Polynomial.zero(qq, 2)})
    assert element.degree() == 2
    mixed = StructureAlgebraElement({"a": x1, "b": Polynomial.constant(qq, 2)})
    with pytest.raises(PreconditionError):
        mixed.degree()

def test_structure_element_product(qq):
    """Test for the componentwise product"""
    x1 = Polynomial.variable(qq, 2, 0)
    x2 = Polynomial.variable(qq, 2, 1)
    product = StructureAlgebraElement({"a": x1, "b": x2}) * StructureAlgebraElement({"a": x2, "b": x2})
    assert product.components["a"] == x1 * x2
    assert product.degree() == 4
