"""Natural numbers extended by an absorbing infinity."""

from __future__ import annotations

import functools


@functools.total_ordering
class ExtNat:
    """A value in ``{0, 1, 2, ...} ∪ {∞}``.

    Instances compare and hash equal to the matching ``int`` when finite, so
    ``ExtNat(3) == 3`` and matrices of ExtNat can be checked against plain
    integer literals. Addition is absorbing: ``x + INF == INF``.
    """

    __slots__ = ("_value",)

    def __init__(self, value: int | None):
        if value is not None:
            if isinstance(value, bool) or not isinstance(value, int):
                raise TypeError(f"ExtNat value must be int or None, got {value!r}")
            if value < 0:
                raise ValueError(f"ExtNat value must be non-negative, got {value}")
        self._value = value

    @classmethod
    def coerce(cls, x: ExtNat | int) -> ExtNat:
        if isinstance(x, ExtNat):
            return x
        return cls(x)

    @classmethod
    def parse(cls, text: str) -> ExtNat:
        text = text.strip()
        if text in ("inf", "∞"):
            return INF
        if not text.isdigit():
            raise ValueError(f"not an extended natural: {text!r}")
        return cls(int(text))

    @property
    def is_finite(self) -> bool:
        return self._value is not None

    @property
    def value(self) -> int | None:
        """The finite value, or ``None`` for infinity."""
        return self._value

    def __int__(self) -> int:
        if self._value is None:
            raise OverflowError("cannot convert infinity to int")
        return self._value

    def __bool__(self) -> bool:
        return self._value is None or self._value > 0

    def __add__(self, other: ExtNat | int) -> ExtNat:
        if isinstance(other, int) and not isinstance(other, bool):
            other = ExtNat(other)
        if not isinstance(other, ExtNat):
            return NotImplemented
        if self._value is None or other._value is None:
            return INF
        return ExtNat(self._value + other._value)

    __radd__ = __add__

    def _key(self) -> tuple[int, int]:
        return (1, 0) if self._value is None else (0, self._value)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            return self._value == other
        if isinstance(other, ExtNat):
            return self._value == other._value
        return NotImplemented

    def __lt__(self, other: ExtNat | int) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = ExtNat(other)
        if not isinstance(other, ExtNat):
            return NotImplemented
        return self._key() < other._key()

    def __hash__(self) -> int:
        return hash(self._value) if self._value is not None else hash("inf")

    def __str__(self) -> str:
        return "inf" if self._value is None else str(self._value)

    def __repr__(self) -> str:
        return "INF" if self._value is None else f"ExtNat({self._value})"


INF = ExtNat(None)
ZERO = ExtNat(0)
