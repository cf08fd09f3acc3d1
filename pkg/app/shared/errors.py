"""
Иерархия исключений проекта.

Каждое исключение несёт машинный код `code`, по которому контроллер CLI
выбирает код завершения.
"""


class GaussPowerSumError(Exception):
    code = "ERROR"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


class PDividesDenominatorError(GaussPowerSumError):
    """p делит знаменатель: вычет в Z_(p) не определён."""

    code = "P_DIVIDES_DENOMINATOR"


class BernoulliUndefinedError(GaussPowerSumError):
    code = "BERNOULLI_UNDEFINED"


class ZeroSumError(GaussPowerSumError):
    """Сумма равна нулю гауссова кольца, оценка бесконечна."""

    code = "ZERO_SUM"


class DomainError(GaussPowerSumError):
    code = "DOMAIN"


class ModulusMismatchError(GaussPowerSumError):
    """Операция над вычетами с разными модулями (ошибка программы)."""

    code = "MODULUS_MISMATCH"


class InvalidArgumentsError(GaussPowerSumError):
    code = "INVALID_ARGUMENTS"
