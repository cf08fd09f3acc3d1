"""
Числа и многочлены Бернулли в точной рациональной арифметике, знаменатели
по фон Штаудту–Клаузену и вычеты чисел Бернулли в локализации Z_(p).
"""
import logging
import threading
from fractions import Fraction
from math import comb, lcm
from typing import List

from sympy import divisors

from app.models.residue import Residue
from app.shared.errors import PDividesDenominatorError
from app.shared.primes import is_prime

logger = logging.getLogger(__name__)

# B_0, B_1 при соглашении B_1 = -1/2
_memo: List[Fraction] = [Fraction(1), Fraction(-1, 2)]
_memo_lock = threading.Lock()


def _extend_memo(n: int) -> None:
    """Достраивает таблицу до B_n по рекурренции sum_{k<=m} C(m+1,k) B_k = 0."""
    with _memo_lock:
        start = len(_memo)
        if start > n:
            return
        for m in range(start, n + 1):
            if m % 2 == 1:
                _memo.append(Fraction(0))
                continue
            # общий знаменатель свободен от квадратов, складываем числители без gcd
            terms = [(comb(m + 1, k), _memo[k]) for k in range(0, m) if k < 2 or k % 2 == 0]
            common = 1
            for _, b in terms:
                common = lcm(common, b.denominator)
            total = sum(c * b.numerator * (common // b.denominator) for c, b in terms)
            _memo.append(Fraction(-total, common * (m + 1)))
        logger.debug(f"Таблица Бернулли расширена до B_{n}")


def bernoulli_exact(n: int) -> Fraction:
    """Точное B_n; запрос B_n материализует B_0..B_n."""
    if n < 0:
        raise ValueError(f"Индекс числа Бернулли должен быть неотрицательным: {n}")
    if n >= len(_memo):
        _extend_memo(n)
    return _memo[n]


def bernoulli_poly_eval(n: int, x: Fraction) -> Fraction:
    """B_n(x) = sum_j C(n, j) B_{n-j} x^j."""
    x = Fraction(x)
    bernoulli_exact(n)
    total = Fraction(0)
    power = Fraction(1)
    for j in range(n + 1):
        b = _memo[n - j]
        if b:
            total += comb(n, j) * b * power
        power *= x
    return total


def vsc_denominator(n: int) -> int:
    """Произведение простых q с (q-1) | n, знаменатель B_n для чётного n >= 2."""
    if n < 2 or n % 2:
        raise ValueError(f"Ожидалось чётное n >= 2, получено {n}")
    result = 1
    for d in divisors(n):
        if is_prime(d + 1):
            result *= d + 1
    return result


def fraction_mod(x: Fraction, p: int, k: int) -> Residue:
    """Вычет p-целого рационального числа в Z/p^k."""
    modulus = p ** k
    if x.denominator % p == 0:
        raise PDividesDenominatorError(f"{p} делит знаменатель {x.denominator}")
    return Residue.of(x.numerator * pow(x.denominator, -1, modulus), modulus)


def bernoulli_mod(n: int, p: int, k: int) -> Residue:
    """
    num(B_n) * den(B_n)^{-1} в Z/p^k.

    Отклоняет чётные n >= 2 с (p-1) | n: по фон Штаудту–Клаузену p делит
    знаменатель, и вычет не определён. Для p*B_n есть p_times_bernoulli_mod.
    """
    if n >= 2 and n % 2 == 0 and n % (p - 1) == 0:
        raise PDividesDenominatorError(
            f"B_{n}: (p-1) | n при p={p}, вычет в Z_({p}) не определён"
        )
    return fraction_mod(bernoulli_exact(n), p, k)


def p_times_bernoulli_mod(n: int, p: int, k: int) -> Residue:
    """p*B_n в Z/p^k; знаменатели свободны от квадратов, поэтому p*B_n p-цело."""
    return fraction_mod(p * bernoulli_exact(n), p, k)


def bernoulli_numerator_divisible(p: int, k: int) -> bool:
    """Точная проверка p | num(B_k)."""
    return bernoulli_exact(k).numerator % p == 0
