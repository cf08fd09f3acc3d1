"""
Вычеты по модулю p^K и их гауссовы пары.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from app.shared.errors import ModulusMismatchError


@dataclass(frozen=True, slots=True)
class Residue:
    """Элемент Z/M; модуль хранится в каждом значении и проверяется в каждой операции."""

    value: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError(f"Модуль должен быть положительным: {self.modulus}")
        if not 0 <= self.value < self.modulus:
            object.__setattr__(self, "value", self.value % self.modulus)

    @classmethod
    def of(cls, value: int, modulus: int) -> "Residue":
        return cls(value % modulus, modulus)

    def _coerce(self, other: Union[int, "Residue"]) -> int:
        if isinstance(other, Residue):
            if other.modulus != self.modulus:
                raise ModulusMismatchError(
                    f"Разные модули: {self.modulus} и {other.modulus}"
                )
            return other.value
        if isinstance(other, int):
            return other
        raise TypeError(f"Неподдерживаемый операнд: {type(other).__name__}")

    def __add__(self, other: Union[int, "Residue"]) -> "Residue":
        return Residue.of(self.value + self._coerce(other), self.modulus)

    __radd__ = __add__

    def __sub__(self, other: Union[int, "Residue"]) -> "Residue":
        return Residue.of(self.value - self._coerce(other), self.modulus)

    def __rsub__(self, other: int) -> "Residue":
        return Residue.of(self._coerce(other) - self.value, self.modulus)

    def __neg__(self) -> "Residue":
        return Residue.of(-self.value, self.modulus)

    def __mul__(self, other: Union[int, "Residue"]) -> "Residue":
        return Residue.of(self.value * self._coerce(other), self.modulus)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Residue":
        return Residue(pow(self.value, exponent, self.modulus), self.modulus)

    def inverse(self) -> "Residue":
        # ValueError от pow, если значение не взаимно просто с модулем
        return Residue(pow(self.value, -1, self.modulus), self.modulus)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Residue):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.modulus
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.modulus))

    @property
    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value

    def __str__(self) -> str:
        return f"{self.value} (mod {self.modulus})"


@dataclass(frozen=True, slots=True)
class GaussResidue:
    """𝐆_n(p) mod p^K: пара вычетов с общим модулем."""

    re: Residue
    im: Residue

    def __post_init__(self):
        if self.re.modulus != self.im.modulus:
            raise ModulusMismatchError(
                f"Компоненты с разными модулями: {self.re.modulus} и {self.im.modulus}"
            )

    @classmethod
    def of(cls, re: int, im: int, modulus: int) -> "GaussResidue":
        return cls(Residue.of(re, modulus), Residue.of(im, modulus))

    @property
    def modulus(self) -> int:
        return self.re.modulus

    @property
    def is_zero(self) -> bool:
        return self.re.is_zero and self.im.is_zero

    def __add__(self, other: "GaussResidue") -> "GaussResidue":
        return GaussResidue(self.re + other.re, self.im + other.im)

    def scale(self, factor: Union[int, Residue]) -> "GaussResidue":
        return GaussResidue(self.re * factor, self.im * factor)

    def format(self) -> str:
        """Строка вида "re=.. im=.. (mod M)"."""
        return f"re={self.re.value} im={self.im.value} (mod {self.modulus})"
