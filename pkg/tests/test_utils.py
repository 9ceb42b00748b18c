import pytest

from app.lib.exceptions import UsageError
from app.lib.utils import display_word, even_ceil, parse_field, parse_parabolic, table_sort_key
from app.models.ring import PrimeField, RationalField

def test_parse_field_labels():
    """Test for the accepted field spellings"""
    assert parse_field("Q") == RationalField()
    assert parse_field("F3") == PrimeField(3)
    assert parse_field("Fp:7") == PrimeField(7)

def test_parse_field_rejects_bad_labels():
    """Test for unknown fields and even characteristic"""
    with pytest.raises(UsageError):
        parse_field("R")
    with pytest.raises(UsageError):
        parse_field("F2")
    with pytest.raises(UsageError):
        parse_field("F9")

def test_parse_parabolic():
    """Test for comma lists of simple indices"""
    assert parse_parabolic("1,3") == frozenset({1, 3})
    assert parse_parabolic(" 2 ") == frozenset({2})
    assert parse_parabolic("") == frozenset()
    assert parse_parabolic(None) == frozenset()

def test_parse_parabolic_out_of_range():
    """Test for indices outside 1..rank"""
    with pytest.raises(UsageError):
        parse_parabolic("1,4", rank=3)
    with pytest.raises(UsageError):
        parse_parabolic("a,b")

def test_even_ceil_and_display():
    """Test for the small formatting helpers"""
    assert even_ceil(5) == 6
    assert even_ceil(4) == 4
    assert display_word("") == "e"
    assert display_word("121") == "121"
    assert table_sort_key(2, "12", 0, "") < table_sort_key(2, "21", 0, "")
