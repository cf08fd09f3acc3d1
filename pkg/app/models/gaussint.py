"""
Гауссовы целые числа Z[i] с точными компонентами и p-адическая оценка.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Optional, Union


@total_ordering
class Valuation:
    """
    p-адическая оценка: неотрицательное целое либо INFINITE (для нуля).

    INFINITE больше любого конечного значения. Сравнение с int допускается.
    """

    __slots__ = ("_value",)

    def __init__(self, value: Optional[int]):
        if value is not None and value < 0:
            raise ValueError(f"Оценка не может быть отрицательной: {value}")
        self._value = value

    @property
    def value(self) -> Optional[int]:
        return self._value

    @property
    def is_infinite(self) -> bool:
        return self._value is None

    def __int__(self) -> int:
        if self._value is None:
            raise OverflowError("INFINITE valuation has no integer value")
        return self._value

    def _key(self, other: Union[int, "Valuation"]):
        if isinstance(other, Valuation):
            return other._value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __eq__(self, other: object) -> bool:
        key = self._key(other)  # type: ignore[arg-type]
        if key is NotImplemented:
            return NotImplemented
        return self._value == key

    def __lt__(self, other: Union[int, "Valuation"]) -> bool:
        key = self._key(other)
        if key is NotImplemented:
            return NotImplemented
        if self._value is None:
            return False
        if key is None:
            return True
        return self._value < key

    def __hash__(self) -> int:
        return hash(("Valuation", self._value))

    def __add__(self, other: Union[int, "Valuation"]) -> "Valuation":
        key = self._key(other)
        if key is NotImplemented:
            return NotImplemented
        if self._value is None or key is None:
            return INFINITE
        return Valuation(self._value + key)

    __radd__ = __add__

    def __repr__(self) -> str:
        return "Valuation(INFINITE)" if self._value is None else f"Valuation({self._value})"

    def __str__(self) -> str:
        return "inf" if self._value is None else str(self._value)


INFINITE = Valuation(None)


@dataclass(frozen=True, slots=True)
class GaussInt:
    """Элемент re + im·i кольца Z[i]."""

    re: int
    im: int = 0

    @classmethod
    def of(cls, value: Union[int, "GaussInt"]) -> "GaussInt":
        if isinstance(value, GaussInt):
            return value
        return cls(value, 0)

    def __add__(self, other: Union[int, "GaussInt"]) -> "GaussInt":
        if isinstance(other, (int, GaussInt)):
            o = GaussInt.of(other)
            return GaussInt(self.re + o.re, self.im + o.im)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self) -> "GaussInt":
        return GaussInt(-self.re, -self.im)

    def __sub__(self, other: Union[int, "GaussInt"]) -> "GaussInt":
        if isinstance(other, (int, GaussInt)):
            return self + (-GaussInt.of(other))
        return NotImplemented

    def __rsub__(self, other: int) -> "GaussInt":
        return (-self) + other

    def __mul__(self, other: Union[int, "GaussInt"]) -> "GaussInt":
        if isinstance(other, int):
            return GaussInt(self.re * other, self.im * other)
        if isinstance(other, GaussInt):
            return gauss_mul(self, other)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "GaussInt":
        return gauss_pow(self, n)

    def conj(self) -> "GaussInt":
        return GaussInt(self.re, -self.im)

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def format(self) -> str:
        """Строка вида "a + bi" / "a - bi" с точными десятичными цифрами."""
        sign = "-" if self.im < 0 else "+"
        return f"{self.re} {sign} {abs(self.im)}i"

    def __str__(self) -> str:
        return self.format()


ONE = GaussInt(1, 0)
I = GaussInt(0, 1)


def gauss_mul(z: GaussInt, w: GaussInt) -> GaussInt:
    return GaussInt(z.re * w.re - z.im * w.im, z.re * w.im + z.im * w.re)


def gauss_pow(z: GaussInt, n: int) -> GaussInt:
    """z^n возведением в квадрат и умножением; z^0 = 1."""
    if n < 0:
        raise ValueError(f"Показатель должен быть неотрицательным: {n}")
    result = ONE
    base = z
    while n:
        if n & 1:
            result = gauss_mul(result, base)
        n >>= 1
        if n:
            base = gauss_mul(base, base)
    return result


def mul_i_pow(z: GaussInt, j: int) -> GaussInt:
    """Умножение на i^j поворотом компонент (период 4)."""
    r = j % 4
    if r == 0:
        return z
    if r == 1:
        return GaussInt(-z.im, z.re)
    if r == 2:
        return GaussInt(-z.re, -z.im)
    return GaussInt(z.im, -z.re)


def vp_int(x: int, p: int) -> Valuation:
    if x == 0:
        return INFINITE
    x = abs(x)
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return Valuation(v)


def vp_gauss(z: GaussInt, p: int) -> Valuation:
    """v_p(x+yi) = min(v_p(x), v_p(y)); INFINITE только для нуля."""
    return min(vp_int(z.re, p), vp_int(z.im, p))
