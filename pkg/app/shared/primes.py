"""
Простые числа: детерминированная проверка и перечисление диапазонов.

sympy.isprime детерминирован для всех n < 2**64 (сильный тест
Миллера–Рабина по фиксированным основаниям плюс BPSW выше), а
sympy.primerange перечисляет простые решетом.
"""
from typing import List

from sympy import isprime, primerange

from app.shared.errors import InvalidArgumentsError


def is_prime(n: int) -> bool:
    return bool(isprime(n))


def is_odd_prime(n: int) -> bool:
    return n > 2 and is_prime(n)


def odd_primes_between(p_min: int, p_max: int) -> List[int]:
    """Нечётные простые p с p_min <= p <= p_max, по возрастанию."""
    if p_max < 3 or p_min > p_max:
        return []
    return [int(p) for p in primerange(max(3, p_min), p_max + 1)]


def require_odd_prime(p: int, name: str = "p") -> int:
    if not is_odd_prime(p):
        raise InvalidArgumentsError(f"{name}={p} не является нечётным простым")
    return p
