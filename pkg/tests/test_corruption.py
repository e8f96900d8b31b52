import pytest
from hypothesis import given
from hypothesis import strategies as st

from cloudfi.mutation import CORRUPTION_RULES, Kind, corrupt, corrupt_value, kind_of


class Thing:
    pass


@pytest.mark.parametrize("value, expected", [
    (True, False),
    (False, True),
    (7, -1),
    (0, -1),
    (2.5, -1.0),
    ("name", ""),
    ([1, 2], []),
    ((1,), ()),
    ({"a": 1}, {}),
    ({1}, set()),
])
def test_table(value, expected):
    out = corrupt_value(value)
    assert out == expected
    assert type(out) is type(expected)


def test_object_reference_becomes_none():
    assert kind_of(Thing()) is Kind.OBJECT_REFERENCE
    assert corrupt_value(Thing()) is None
    assert corrupt_value(None) is None


def test_bool_is_not_integer():
    assert kind_of(True) is Kind.BOOLEAN
    assert kind_of(1) is Kind.INTEGER


def test_unknown_kind_rejected():
    with pytest.raises(ValueError):
        corrupt("pointer-to-member", 3)


def test_explicit_kind_by_value():
    assert corrupt("string", "x") == ""
    assert corrupt(Kind.COLLECTION, [1]) == []


def test_every_kind_documented():
    assert set(CORRUPTION_RULES) == set(Kind)


values = st.one_of(
    st.booleans(), st.integers(), st.floats(allow_nan=False), st.text(),
    st.lists(st.integers()), st.dictionaries(st.text(), st.integers()),
    st.tuples(st.integers()), st.frozensets(st.integers()),
)


@given(values)
def test_corruption_keeps_type_and_differs(value):
    out = corrupt_value(value)
    assert type(out) is type(value)
    if isinstance(value, bool):
        assert out is (not value)
    elif isinstance(value, (int, float)):
        assert out == -1
    else:
        assert len(out) == 0
