"""
Классические степенные суммы S_r(N) = sum_{t=1}^{N} t^r: точно, по модулю,
через точное тождество Фаульхабера и через усечения по модулю p^6, а также
биномиальные коэффициенты (строки Паскаля, теорема Люка).
"""
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial
from typing import Iterator, List, Tuple

from app.models.residue import Residue
from app.service.bernoulli import (
    bernoulli_exact,
    bernoulli_mod,
    bernoulli_poly_eval,
    fraction_mod,
    p_times_bernoulli_mod,
)
from app.shared.errors import (
    BernoulliUndefinedError,
    DomainError,
    PDividesDenominatorError,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class STable:
    """values[j] = S_j(p-1) mod p^k для j = 0..n_max."""

    p: int
    k: int
    values: Tuple[Residue, ...]

    @property
    def modulus(self) -> int:
        return self.p ** self.k

    @property
    def n_max(self) -> int:
        return len(self.values) - 1

    def ints(self) -> List[int]:
        return [r.value for r in self.values]

    def check_invariants(self) -> bool:
        """Проверка values[0] ≡ p-1 и values[1] ≡ p(p-1)/2."""
        m = self.modulus
        if self.values[0].value != (self.p - 1) % m:
            return False
        if len(self.values) > 1 and self.values[1].value != (self.p * (self.p - 1) // 2) % m:
            return False
        return True


def s_exact(r: int, n: int) -> int:
    return sum(t ** r for t in range(1, n + 1))


def s_faulhaber(r: int, n: int) -> int:
    """S_r(N) = (B_{r+1}(N+1) - B_{r+1}(1)) / (r+1)."""
    value = (bernoulli_poly_eval(r + 1, Fraction(n + 1)) - bernoulli_poly_eval(r + 1, Fraction(1))) / (r + 1)
    if value.denominator != 1:
        raise ArithmeticError(f"Нецелое значение по формуле Фаульхабера: {value}")
    return value.numerator


def s_faulhaber_p_adic(r: int, p: int) -> Fraction:
    """Точное тождество S_r(p-1) = sum_{t=1}^{r+1} p^t/t * C(r, t-1) * B_{r-t+1}."""
    total = Fraction(0)
    for t in range(1, r + 2):
        b = bernoulli_exact(r - t + 1)
        if b:
            total += Fraction(p ** t, t) * comb(r, t - 1) * b
    return total


def s_mod(r: int, n: int, modulus: int) -> Residue:
    if modulus < 2:
        raise ValueError(f"Модуль должен быть >= 2: {modulus}")
    return Residue.of(sum(pow(t, r, modulus) for t in range(1, n + 1)), modulus)


def s_table_mod(n_max: int, p: int, k: int) -> STable:
    """
    Все S_j(p-1) mod p^k, j <= n_max, одним проходом по a = 1..p-1
    с инкрементальной степенью a^j: O(p * n_max) модульных умножений.
    """
    if n_max < 1:
        raise ValueError(f"n_max должен быть >= 1: {n_max}")
    modulus = p ** k
    acc = [0] * (n_max + 1)
    for a in range(1, p):
        power = 1
        for j in range(n_max + 1):
            acc[j] += power
            power = power * a % modulus
    logger.debug(f"STable построена: p={p}, k={k}, n_max={n_max}")
    return STable(p=p, k=k, values=tuple(Residue.of(v, modulus) for v in acc))


def _trunc_term(p: int, power: int, coeff: int, divisor: int, index: int, k: int) -> Residue:
    """
    (p^power / divisor) * coeff * B_index в Z/p^k.

    Если p делит знаменатель B_index, берётся p-целое произведение p*B_index
    и одна степень p переносится из коэффициента.
    """
    modulus = p ** k
    scale = Residue.of(coeff, modulus) * Residue.of(divisor, modulus).inverse()
    try:
        b = bernoulli_mod(index, p, k)
        return scale * pow(p, power, modulus) * b
    except PDividesDenominatorError as e:
        if power < 1:
            raise BernoulliUndefinedError(f"B_{index} при p={p}: {e.message}") from e
        return scale * pow(p, power - 1, modulus) * p_times_bernoulli_mod(index, p, k)


def s_trunc_p6(r: int, p: int) -> Residue:
    """
    Усечение S_r(p-1) по модулю p^6 для p >= 7 и 1 <= r <= p.

    Чётное r: p B_r + p^3/3! r(r-1) B_{r-2} + p^5/5! r(r-1)(r-2)(r-3) B_{r-4};
    нечётное r: p^2/2! r B_{r-1} + p^4/4! r(r-1)(r-2) B_{r-3};
    для r из {2,3,4,5} добавляется p^r B_1; S_1 = p(p-1)/2 точно.
    """
    if p < 7:
        raise DomainError(f"Усечение по модулю p^6 требует p >= 7, получено p={p}")
    if not 1 <= r <= p:
        raise DomainError(f"Ожидалось 1 <= r <= p, получено r={r}, p={p}")
    k = 6
    modulus = p ** k
    if r == 1:
        return Residue.of(p * (p - 1) // 2, modulus)

    if r % 2 == 0:
        total = _trunc_term(p, 1, 1, 1, r, k)
        total += _trunc_term(p, 3, r * (r - 1), factorial(3), r - 2, k)
        if r >= 4:
            total += _trunc_term(p, 5, r * (r - 1) * (r - 2) * (r - 3), factorial(5), r - 4, k)
    else:
        total = _trunc_term(p, 2, r, factorial(2), r - 1, k)
        total += _trunc_term(p, 4, r * (r - 1) * (r - 2), factorial(4), r - 3, k)
    if r <= 5:
        total += fraction_mod(p ** r * bernoulli_exact(1), p, k)
    return total


def binom_exact_row(n: int) -> List[int]:
    """Строка Паскаля C(n, 0..n) мультипликативной рекуррентой."""
    row = [1]
    for j in range(n):
        row.append(row[-1] * (n - j) // (j + 1))
    return row


def binom_row_mod(n: int, modulus: int) -> List[int]:
    return [c % modulus for c in binom_exact_row(n)]


def iter_binom_rows_mod(n_max: int, modulus: int) -> Iterator[Tuple[int, List[int]]]:
    """Строки Паскаля mod M для n = 0..n_max аддитивным проходом."""
    row = [1 % modulus]
    yield 0, row
    for n in range(1, n_max + 1):
        row = [1 % modulus] + [(row[j - 1] + row[j]) % modulus for j in range(1, n)] + [1 % modulus]
        yield n, row


def binom_mod_p_lucas(n: int, k: int, p: int) -> Residue:
    """C(n, k) mod p как произведение C(n_i, k_i) по цифрам в системе счисления p."""
    if not 0 <= k <= n:
        raise ValueError(f"Ожидалось 0 <= k <= n, получено n={n}, k={k}")
    result = 1
    while n or k:
        n_i, k_i = n % p, k % p
        if k_i > n_i:
            return Residue(0, p)
        result = result * comb(n_i, k_i) % p
        n //= p
        k //= p
    return Residue.of(result, p)


def central_binom_mod_p4(p: int) -> Residue:
    """C(2p-1, p-1) mod p^4 за O(p) умножений."""
    if p < 5:
        raise DomainError(f"Критерий Вольстенхольма определён для p >= 5, получено p={p}")
    modulus = p ** 4
    numerator = 1
    denominator = 1
    for j in range(1, p):
        numerator = numerator * (p + j) % modulus
        denominator = denominator * j % modulus
    return Residue.of(numerator * pow(denominator, -1, modulus), modulus)


def is_wolstenholme_prime(p: int) -> bool:
    """C(2p-1, p-1) ≡ 1 (mod p^4); равносильно B_{p-3} ≡ 0 (mod p) при p >= 5."""
    return central_binom_mod_p4(p) == 1
