"""Type-driven value corruption used by the faulty branch of a mutant."""

import enum


class Kind(enum.Enum):
    OBJECT_REFERENCE = "object-reference"
    INTEGER = "integer"
    STRING = "string"
    BOOLEAN = "boolean"
    COLLECTION = "collection"


# kind -> human description of the replacement (documentation table)
CORRUPTION_RULES = {
    Kind.OBJECT_REFERENCE: "None (absent reference)",
    Kind.INTEGER: "-1 of the same numeric type",
    Kind.STRING: "empty string",
    Kind.BOOLEAN: "logical negation",
    Kind.COLLECTION: "empty collection of the same type",
}

INTEGER_SENTINEL = -1


def kind_of(value):
    # bool before int: bool is an int subclass
    if isinstance(value, bool):
        return Kind.BOOLEAN
    if isinstance(value, (int, float)):
        return Kind.INTEGER
    if isinstance(value, str):
        return Kind.STRING
    if isinstance(value, (list, tuple, dict, set, frozenset)):
        return Kind.COLLECTION
    return Kind.OBJECT_REFERENCE


def corrupt(kind, original):
    if not isinstance(kind, Kind):
        try:
            kind = Kind(kind)
        except ValueError:
            raise ValueError(f"no corruption rule for kind {kind!r}") from None
    if kind is Kind.OBJECT_REFERENCE:
        return None
    if kind is Kind.INTEGER:
        return type(original)(INTEGER_SENTINEL) if isinstance(original, (int, float)) and not isinstance(original, bool) else INTEGER_SENTINEL
    if kind is Kind.STRING:
        return ""
    if kind is Kind.BOOLEAN:
        return not original
    return type(original)() if isinstance(original, (list, tuple, dict, set, frozenset)) else []


def corrupt_value(value):
    return corrupt(kind_of(value), value)
