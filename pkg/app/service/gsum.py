"""
Гауссовы степенные суммы F_n(k,m) = sum_{a<=k} sum_{b<=m} (a+bi)^n и
G_n(p) = F_n(p-1, p-1).

Независимый оракул (прямое суммирование), точный путь через разложение
sum_j C(n,j) i^j S_{n-j}(k) S_j(m), быстрый модульный путь по STable,
адаптивная p-адическая оценка, классы расположения и проверка
полиномиальности по (k, m).
"""
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Optional

from sympy import Matrix

from app.models.gaussint import GaussInt, Valuation, gauss_pow, mul_i_pow, vp_gauss, vp_int
from app.models.models import LocationClass
from app.models.residue import GaussResidue
from app.service.powersum import STable, binom_exact_row, binom_row_mod, iter_binom_rows_mod, s_faulhaber, s_table_mod
from app.shared.config import DEFAULT_PRECISION_CEILING
from app.shared.errors import InvalidArgumentsError, ZeroSumError

logger = logging.getLogger(__name__)

START_PRECISION = 8


def f_brute(n: int, k: int, m: int) -> GaussInt:
    """Прямое суммирование по всем точкам решётки, оракул для остальных путей."""
    total = GaussInt(0, 0)
    for a in range(1, k + 1):
        for b in range(1, m + 1):
            total = total + gauss_pow(GaussInt(a, b), n)
    return total


def s_exact_row(n_max: int, upper: int) -> List[int]:
    """[S_0(N), ..., S_{n_max}(N)] точно, с инкрементальными степенями."""
    acc = [0] * (n_max + 1)
    for t in range(1, upper + 1):
        power = 1
        for j in range(n_max + 1):
            acc[j] += power
            power *= t
    return acc


def s_row(n_max: int, upper: int) -> List[int]:
    """
    [S_0(N), ..., S_{n_max}(N)] по формуле Фаульхабера; при N <= n_max
    прямое суммирование дешевле, и строка берётся из s_exact_row.
    """
    if upper > n_max:
        return [s_faulhaber(r, upper) for r in range(n_max + 1)]
    return s_exact_row(n_max, upper)


def accumulate_i_powers(terms: Iterable, modulus: Optional[int] = None):
    """Сумма c_j * i^j: i^j реализуется перестановкой компонент со знаком."""
    re = im = 0
    for j, c in terms:
        r = j % 4
        if r == 0:
            re += c
        elif r == 1:
            im += c
        elif r == 2:
            re -= c
        else:
            im -= c
    if modulus is not None:
        return re % modulus, im % modulus
    return re, im


def f_factored(n: int, k: int, m: int) -> GaussInt:
    """F_n(k,m) = sum_j C(n,j) i^j S_{n-j}(k) S_j(m) в точной арифметике."""
    row = binom_exact_row(n)
    s_k = s_row(n, k)
    s_m = s_k if m == k else s_row(n, m)
    re, im = accumulate_i_powers((j, row[j] * s_k[n - j] * s_m[j]) for j in range(n + 1))
    return GaussInt(re, im)


def g_exact(n: int, big_n: int) -> GaussInt:
    """Квадратная сумма G_n(N) = F_n(N-1, N-1)."""
    if big_n < 2:
        raise InvalidArgumentsError(f"Ожидалось N >= 2, получено {big_n}")
    return f_factored(n, big_n - 1, big_n - 1)


def _g_mod_from(n: int, table_ints: List[int], row: List[int], modulus: int) -> GaussResidue:
    re, im = accumulate_i_powers(
        ((j, row[j] * table_ints[n - j] * table_ints[j]) for j in range(n + 1)),
        modulus,
    )
    return GaussResidue.of(re, im, modulus)


def g_mod(n: int, p: int, k: int, table: Optional[STable] = None) -> GaussResidue:
    """
    G_n(p) mod p^k по STable и точной строке Паскаля, приведённой по модулю.

    Переданная таблица должна иметь тот же (p, k) и n_max >= n.
    """
    if k < 1:
        raise InvalidArgumentsError(f"Ожидалось K >= 1, получено {k}")
    modulus = p ** k
    if n == 0:
        return GaussResidue.of((p - 1) ** 2, 0, modulus)
    if table is None:
        table = s_table_mod(n, p, k)
    elif table.p != p or table.k != k or table.n_max < n:
        raise InvalidArgumentsError(
            f"STable (p={table.p}, k={table.k}, n_max={table.n_max}) не подходит для n={n}, p={p}, k={k}"
        )
    return _g_mod_from(n, table.ints(), binom_row_mod(n, modulus), modulus)


def residue_valuation(g: GaussResidue, p: int) -> Valuation:
    """Оценка по ненулевому вычету: точна, пока хотя бы одна компонента не нуль."""
    return min(vp_int(g.re.value, p), vp_int(g.im.value, p))


def vp_g(n: int, p: int, ceiling: int = DEFAULT_PRECISION_CEILING) -> Valuation:
    """
    Точная v_p(G_n(p)) с адаптивной точностью: K = 8, удвоение, пока обе
    компоненты обнуляются; выше потолка считается точно.
    """
    if n == 0:
        return Valuation(0)
    k = START_PRECISION
    while k <= ceiling:
        g = g_mod(n, p, k)
        if not g.is_zero:
            return residue_valuation(g, p)
        logger.info(f"G_{n}({p}) ≡ 0 mod {p}^{k}, удваиваем точность")
        k *= 2
    exact = f_factored(n, p - 1, p - 1)
    if exact.is_zero:
        raise ZeroSumError(f"G_{n}({p}) = 0, оценка бесконечна")
    return vp_gauss(exact, p)


def vp_g_batch(
    p: int,
    n_values: Iterable[int],
    k: int = START_PRECISION,
    ceiling: int = DEFAULT_PRECISION_CEILING,
    table: Optional[STable] = None,
) -> Dict[int, Valuation]:
    """
    Оценки для многих показателей по одной STable и одному проходу по
    строкам Паскаля; показатели, обнулившиеся по модулю p^k, уходят в vp_g.
    """
    wanted = sorted(set(n_values))
    if not wanted:
        return {}
    n_max = wanted[-1]
    modulus = p ** k
    if table is None:
        table = s_table_mod(max(n_max, 1), p, k)
    ints = table.ints()
    remaining = set(wanted)
    result: Dict[int, Valuation] = {}
    for n, row in iter_binom_rows_mod(n_max, modulus):
        if n not in remaining:
            continue
        if n == 0:
            result[n] = Valuation(0)
            continue
        g = _g_mod_from(n, ints, row, modulus)
        result[n] = residue_valuation(g, p) if not g.is_zero else vp_g(n, p, ceiling)
    return result


def location_class(n: int) -> LocationClass:
    return {
        0: LocationClass.REAL,
        1: LocationClass.DIAGONAL,
        2: LocationClass.IMAGINARY,
        3: LocationClass.ANTIDIAGONAL,
    }[n % 4]


def satisfies_location(z: GaussInt, cls: LocationClass) -> bool:
    if cls is LocationClass.REAL:
        return z.im == 0
    if cls is LocationClass.IMAGINARY:
        return z.re == 0
    if cls is LocationClass.DIAGONAL:
        return z.re == z.im
    return z.re == -z.im


def check_square_symmetry(n: int, big_n: int) -> bool:
    """G_n(N) = i^n * conj(G_n(N))."""
    g = g_exact(n, big_n)
    return g == mul_i_pow(g.conj(), n)


def verify_polynomiality(n: int, grid: int) -> bool:
    """
    Интерполирует многочлен полной степени <= n+2 по значениям F_n на
    треугольнике узлов внутри [1..grid]^2 и сверяет прогноз в точках
    (grid+1, grid+2) и (grid+2, grid+1), а также во всех остальных узлах сетки.
    """
    degree = n + 2
    if grid < n + 3:
        raise InvalidArgumentsError(f"Ожидалось grid >= n+3 = {n + 3}, получено {grid}")
    monomials = [(i, j) for i in range(degree + 1) for j in range(degree + 1 - i)]
    nodes = [(1 + i, 1 + j) for i, j in monomials]

    values = {}

    def value(k: int, m: int) -> GaussInt:
        if (k, m) not in values:
            values[(k, m)] = f_factored(n, k, m)
        return values[(k, m)]

    matrix = Matrix([[k ** a * m ** b for a, b in monomials] for k, m in nodes])
    # треугольная решётка унисольвентна, но проверяем, а не предполагаем
    if matrix.det() == 0:
        raise ArithmeticError(f"Вырожденная система интерполяции для n={n}")
    rhs_re = Matrix([value(k, m).re for k, m in nodes])
    rhs_im = Matrix([value(k, m).im for k, m in nodes])
    coeffs_re = matrix.LUsolve(rhs_re)
    coeffs_im = matrix.LUsolve(rhs_im)

    def predict(k: int, m: int):
        re = sum(Fraction(int(c.p), int(c.q)) * k ** a * m ** b for c, (a, b) in zip(coeffs_re, monomials))
        im = sum(Fraction(int(c.p), int(c.q)) * k ** a * m ** b for c, (a, b) in zip(coeffs_im, monomials))
        return re, im

    checkpoints = [(grid + 1, grid + 2), (grid + 2, grid + 1)]
    checkpoints += [(k, m) for k in range(1, grid + 1) for m in range(1, grid + 1) if (k, m) not in values]
    for k, m in checkpoints:
        re, im = predict(k, m)
        actual = value(k, m)
        if re != actual.re or im != actual.im:
            logger.warning(f"Многочлен для n={n} расходится с F_{n}({k},{m})")
            return False
    return True
