"""Three-valued flags used by configuration attributes and the decision engine."""
from __future__ import annotations

import enum


class TriBool(enum.Enum):
    YES = "yes"
    NO = "no"
    UNKNOWN = "unknown"

    @staticmethod
    def of(value: bool | None) -> "TriBool":
        if value is None:
            return TriBool.UNKNOWN
        return TriBool.YES if value else TriBool.NO

    def __bool__(self) -> bool:  # pragma: no cover - guard against accidental truthiness
        raise TypeError("TriBool must be compared explicitly, not used as a bool")


def all_of(flags) -> TriBool:
    """Conjunction with Unknown propagation: a definite NO beats UNKNOWN."""
    saw_unknown = False
    for f in flags:
        if f is TriBool.NO:
            return TriBool.NO
        if f is TriBool.UNKNOWN:
            saw_unknown = True
    return TriBool.UNKNOWN if saw_unknown else TriBool.YES


def any_of(flags) -> TriBool:
    """Disjunction with Unknown propagation: a definite YES beats UNKNOWN."""
    saw_unknown = False
    for f in flags:
        if f is TriBool.YES:
            return TriBool.YES
        if f is TriBool.UNKNOWN:
            saw_unknown = True
    return TriBool.UNKNOWN if saw_unknown else TriBool.NO


def neg(flag: TriBool) -> TriBool:
    if flag is TriBool.YES:
        return TriBool.NO
    if flag is TriBool.NO:
        return TriBool.YES
    return TriBool.UNKNOWN
