"""
Машинная проверка сравнений для G_n(p) и сканеры p-адических оценок.

Проверки теорем возвращают TheoremReport (pass ⇔ lhs = rhs покомпонентно),
сканеры гипотез возвращают ValuationRecord с расхождением observed - predicted.
Ни одна функция модуля не выполняет ввод-вывод: отчёты печатает контроллер.
"""
import logging
from math import lcm
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from app.models.gaussint import INFINITE, ONE, Valuation, mul_i_pow, vp_int
from app.models.models import ScanKind, TheoremId, VerifyCheck
from app.models.residue import GaussResidue, Residue
from app.service.bernoulli import bernoulli_mod
from app.service.gsum import START_PRECISION, accumulate_i_powers, g_mod, residue_valuation, vp_g_batch
from app.service.powersum import binom_mod_p_lucas, central_binom_mod_p4, s_mod, s_table_mod
from app.service.stable_service import TableProvider, table_provider
from app.shared.db import prepare_cache
from app.shared.errors import DomainError, InvalidArgumentsError
from app.shared.primes import odd_primes_between, require_odd_prime
from app.shemas.report_shemas import AnomalyRecord, BlockReport, TheoremReport, ValuationRecord
from app.worker import run_per_prime

logger = logging.getLogger(__name__)

WOLSTENHOLME_PRIMES = (16843, 2124679)

# выше этого p путь через S_{p-3}(p-1) mod p^2 не запускается даже с --slow
POWER_SUM_ROUTE_LIMIT = 20000

KNOWN_EXCEPTIONAL_BLOCKS: Tuple[Tuple[int, int], ...] = (
    (37, 8), (59, 11), (101, 17), (103, 6), (233, 21), (257, 41), (263, 25),
    (271, 21), (283, 5), (293, 39), (307, 22), (311, 73), (347, 70), (353, 75),
    (379, 25), (389, 50), (421, 60), (461, 49), (491, 73), (491, 84), (523, 100),
    (577, 13), (587, 23), (607, 148), (617, 5), (619, 107), (631, 20), (647, 59),
    (653, 12), (659, 56), (673, 102), (677, 157), (683, 8), (691, 3), (691, 50),
    (761, 65), (773, 183), (797, 55), (809, 157), (811, 136), (821, 186),
    (877, 217), (929, 130), (929, 205), (953, 39), (1091, 222), (1129, 87),
    (1151, 196), (1151, 242), (1201, 169), (1217, 196), (1229, 196), (1291, 206),
    (1297, 55), (1301, 44), (1307, 213), (1319, 76), (1429, 249), (1483, 56),
    (1609, 339), (1613, 43), (1619, 140), (1621, 245), (1663, 377), (1669, 97),
    (1753, 178), (1759, 380), (1777, 298), (1789, 212), (1811, 380), (1847, 254),
    (1879, 315), (1933, 330), (1951, 414), (1979, 37), (1993, 228), (1997, 193),
    (1997, 472),
)
KNOWN_BLOCKS_BOUND = 2000
P3P5_DEFAULT_N_MAX = 2000


def known_blocks(p_min: int, p_max: int) -> List[Tuple[int, int]]:
    """Известные пары (p, t) в диапазоне; сравнимы со сканом только при p_max < 2000."""
    return [(p, t) for p, t in KNOWN_EXCEPTIONAL_BLOCKS if p_min <= p <= p_max]


def _one_plus_i_pow(n: int, modulus: int, scale: int = 1) -> GaussResidue:
    """scale * (1 + i^n) mod M."""
    z = ONE + mul_i_pow(ONE, n)
    return GaussResidue.of(z.re * scale, z.im * scale, modulus)


def _zero(modulus: int) -> GaussResidue:
    return GaussResidue.of(0, 0, modulus)


def _fan_out(
    task: Callable[..., list],
    primes: Sequence[int],
    threads: int,
    cache_dir: Optional[Path],
    **options,
) -> list:
    """run_per_prime с кэшем, схема которого создана до запуска воркеров."""
    if cache_dir is not None:
        prepare_cache(cache_dir)
    return run_per_prime(task, primes, threads, cache_dir=cache_dir, **options)


def _valuation_of(g: GaussResidue, p: int) -> Valuation:
    """Оценка по вычету; нулевой вычет даёт только нижнюю границу и помечается INFINITE."""
    return INFINITE if g.is_zero else residue_valuation(g, p)


# --- Сравнения по модулю p ---------------------------------------------------

def _period_index(j: int, p: int) -> int:
    # a^j mod p зависит только от j mod (p-1) при j >= 1 (малая теорема Ферма)
    return 0 if j == 0 else (j - 1) % (p - 1) + 1


def g_mod_p(n: int, p: int, period_ints: List[int]) -> GaussResidue:
    """
    G_n(p) mod p по таблице S_0..S_{p-1} mod p и коэффициентам Люка.

    Индексы j, для которых S_j(p-1) ≡ 0 или S_{n-j}(p-1) ≡ 0, пропускаются:
    их вклад нулевой, так что длинные строки Паскаля не строятся.
    """
    period = p - 1
    support = [s for s in range(1, period + 1) if period_ints[s] != 0]
    candidates = [0] if period_ints[0] != 0 else []
    candidates += [j for s in support for j in range(s, n + 1, period)]
    terms = []
    for j in candidates:
        left = period_ints[_period_index(n - j, p)]
        if left == 0:
            continue
        terms.append((j, binom_mod_p_lucas(n, j, p).value * left * period_ints[_period_index(j, p)]))
    re, im = accumulate_i_powers(terms, p)
    return GaussResidue.of(re, im, p)


def check_dichotomy(
    p: int,
    n_max: int,
    include_multiples: bool = True,
    provider: TableProvider = s_table_mod,
) -> List[TheoremReport]:
    """
    G_n(p) ≡ 0 mod p при (p-1) ∤ n и G_n(p) ≡ 1 + i^n mod p при n = r(p-1), 1 <= r < p.

    Проверяются все 1 <= n <= n_max и, если include_multiples, все кратные
    r(p-1) с r < p.
    """
    require_odd_prime(p)
    if n_max < 1:
        raise InvalidArgumentsError(f"Ожидалось n_max >= 1, получено {n_max}")
    ints = provider(p - 1, p, 1).ints()
    exponents = set(range(1, n_max + 1))
    if include_multiples:
        exponents |= {r * (p - 1) for r in range(1, p)}

    reports = []
    for n in sorted(exponents):
        r, rem = divmod(n, p - 1)
        if rem == 0 and r >= p:
            continue
        lhs = g_mod_p(n, p, ints)
        rhs = _zero(p) if rem else _one_plus_i_pow(n, p)
        reports.append(TheoremReport.compare(p, TheoremId.DICHOTOMY, lhs, rhs, n=n))
    return reports


# --- Сравнения по модулю p^2 -------------------------------------------------

def check_endpoint_p2(p: int, provider: TableProvider = s_table_mod) -> List[TheoremReport]:
    """G_n(p) ≡ (p-1) S_n(p-1) (1 + i^n) mod p^2 для 1 <= n <= p-2."""
    require_odd_prime(p)
    modulus = p * p
    table = provider(max(p - 2, 1), p, 2)
    reports = []
    for n in range(1, p - 1):
        lhs = g_mod(n, p, 2, table)
        s_n = s_mod(n, p - 1, modulus).value
        rhs = _one_plus_i_pow(n, modulus, (p - 1) * s_n)
        reports.append(TheoremReport.compare(p, TheoremId.ENDPOINT_P2, lhs, rhs, n=n))
    return reports


def check_even_bernoulli(p: int, provider: TableProvider = s_table_mod) -> List[TheoremReport]:
    """
    G_n(p) ≡ p(p-1) B_n (1 + i^n) mod p^2 для чётных 2 <= n <= p-3, а также
    следствия: ≡ 0 при n ≡ 2 mod 4 и ≡ 2p(p-1) B_n при n ≡ 0 mod 4.

    При p = 3 диапазон пуст.
    """
    require_odd_prime(p)
    exponents = list(range(2, p - 2, 2))
    if not exponents:
        return []
    modulus = p * p
    table = provider(p - 3, p, 2)
    reports = []
    for n in exponents:
        lhs = g_mod(n, p, 2, table)
        b = bernoulli_mod(n, p, 1).value
        rhs = _one_plus_i_pow(n, modulus, p * (p - 1) * b)
        if n % 4 == 2:
            consequence_ok = lhs.is_zero
            detail = "n ≡ 2 mod 4: G_n(p) ≡ 0 mod p^2"
        else:
            consequence_ok = lhs == GaussResidue.of(2 * p * (p - 1) * b, 0, modulus)
            detail = "n ≡ 0 mod 4: G_n(p) ≡ 2p(p-1)B_n mod p^2"
        reports.append(
            TheoremReport.compare(
                p, TheoremId.EVEN_BERNOULLI, lhs, rhs, n=n, extra_ok=consequence_ok, detail=detail
            )
        )
    return reports


def check_gp_mod_p2(p: int, provider: TableProvider = s_table_mod) -> TheoremReport:
    """G_p(p) ≡ 0 mod p^2 для любого нечётного простого p."""
    require_odd_prime(p)
    lhs = g_mod(p, p, 2, provider(p, p, 2))
    return TheoremReport.compare(p, TheoremId.GP_MOD_P2, lhs, _zero(p * p), n=p)


# --- G_p(p) по модулю p^3 и p^6 ----------------------------------------------

def check_thm_split(p: int, provider: TableProvider = s_table_mod) -> TheoremReport:
    """
    G_p(p) ≡ p^2 (1 + i) mod p^3 для p ≡ 1 mod 4.

    Дополнительно проверяются нормированная форма G_p(p)/p^2 ≡ 1 + i mod p
    и равенство v_p(G_p(p)) = 2.
    """
    require_odd_prime(p)
    if p % 4 != 1:
        raise DomainError(f"Сравнение mod p^3 доказано для p ≡ 1 mod 4, получено p={p}")
    square = p * p
    modulus = square * p
    lhs = g_mod(p, p, 3, provider(p, p, 3))
    rhs = GaussResidue.of(square, square, modulus)

    re, im = lhs.re.value, lhs.im.value
    divisible = re % square == 0 and im % square == 0
    normalized = ((re // square) % p, (im // square) % p) if divisible else None
    valuation = _valuation_of(lhs, p)
    extra_ok = normalized == (1, 1) and valuation == 2
    detail = f"v_p={valuation}, G_p(p)/p^2 mod p = {normalized}"
    return TheoremReport.compare(p, TheoremId.SPLIT_P3, lhs, rhs, n=p, extra_ok=extra_ok, detail=detail)


def check_thm_inert(p: int, provider: TableProvider = s_table_mod) -> TheoremReport:
    """
    G_p(p) ≡ -(p^5/12)(p-1)^2(p-2) B_{p-3} (1 - i) mod p^6 для p ≡ 3 mod 4, p >= 7.

    Дополнительно: v_p(G_p(p)) = 5 ⇔ B_{p-3} ≢ 0 mod p и Re ≡ -Im mod p^6.
    """
    if p == 3:
        raise DomainError("Сравнение mod p^6 не выполняется при p=3: G_3(3) = -27 + 27i")
    require_odd_prime(p)
    if p % 4 != 3 or p < 7:
        raise DomainError(f"Сравнение mod p^6 доказано для p ≡ 3 mod 4, p >= 7, получено p={p}")
    modulus = p ** 6
    lhs = g_mod(p, p, 6, provider(p, p, 6))

    b = bernoulli_mod(p - 3, p, 6)
    c = Residue.of(-(p ** 5) * (p - 1) ** 2 * (p - 2), modulus) * Residue.of(12, modulus).inverse() * b
    rhs = GaussResidue(c, -c)

    valuation = _valuation_of(lhs, p)
    b_nonzero = not bernoulli_mod(p - 3, p, 1).is_zero
    antidiagonal = (lhs.re + lhs.im).is_zero
    extra_ok = ((valuation == 5) == b_nonzero) and antidiagonal
    detail = f"v_p={valuation}, B_(p-3) mod p {'≠' if b_nonzero else '='} 0"
    return TheoremReport.compare(p, TheoremId.INERT_P6, lhs, rhs, n=p, extra_ok=extra_ok, detail=detail)


def check_wolstenholme(p: int, slow: bool = False) -> List[TheoremReport]:
    """
    Для известного простого Вольстенхольма: C(2p-1, p-1) ≡ 1 mod p^4.

    С slow=True и p <= POWER_SUM_ROUTE_LIMIT также S_{p-3}(p-1) ≡ 0 mod p^2,
    то есть p | num(B_{p-3}) по критерию через степенные суммы.
    """
    if p not in WOLSTENHOLME_PRIMES:
        raise DomainError(f"p={p} не входит в список известных простых Вольстенхольма {WOLSTENHOLME_PRIMES}")
    modulus = p ** 4
    lhs = GaussResidue(central_binom_mod_p4(p), Residue(0, modulus))
    reports = [
        TheoremReport.compare(
            p, TheoremId.WOLSTENHOLME, lhs, GaussResidue.of(1, 0, modulus),
            detail="C(2p-1, p-1) mod p^4",
        )
    ]
    if slow:
        if p <= POWER_SUM_ROUTE_LIMIT:
            square = p * p
            s = s_mod(p - 3, p - 1, square)
            reports.append(
                TheoremReport.compare(
                    p, TheoremId.WOLSTENHOLME, GaussResidue(s, Residue(0, square)), _zero(square),
                    n=p - 3, detail="S_(p-3)(p-1) mod p^2",
                )
            )
        else:
            logger.warning(f"Путь через степенные суммы для p={p} пропущен: слишком большое p")
    return reports


# --- Сканеры гипотез ---------------------------------------------------------

def expected_valuation(n: int) -> int:
    """Закон mod 4: n при n <= 3, иначе 1, 2, 3, 4 по n mod 4 = 0, 1, 2, 3."""
    if n <= 3:
        return n
    return n % 4 + 1


def is_irregular_index(p: int, k: int) -> bool:
    """S_k(p-1) ≡ 0 mod p^2, что равносильно p | num(B_k) для чётного 2 <= k <= p-3."""
    if k % 2 != 0 or not 2 <= k <= p - 3:
        raise InvalidArgumentsError(f"Ожидалось чётное k из [2, p-3], получено k={k}, p={p}")
    return s_mod(k, p - 1, p * p).is_zero


def _records(p: int, valuations: Dict[int, Valuation], predicted: Iterable[Tuple[int, int]]) -> List[ValuationRecord]:
    records = []
    for n, expected in predicted:
        record = ValuationRecord.build(p, n, valuations[n], expected)
        if record.has_discrepancy:
            logger.warning(f"p={p}, n={n}: наблюдалось {record.observed}, ожидалось {expected}")
        records.append(record)
    return records


def scan_mod4(p: int, provider: TableProvider = s_table_mod) -> List[ValuationRecord]:
    """Наблюдаемые и ожидаемые оценки v_p(G_n(p)) для 1 <= n <= p-2."""
    require_odd_prime(p)
    if p < 7:
        raise DomainError(f"Закон mod 4 сканируется для p >= 7, получено p={p}")
    exponents = range(1, p - 1)
    table = provider(p - 2, p, START_PRECISION)
    valuations = vp_g_batch(p, exponents, table=table)
    return _records(p, valuations, ((n, expected_valuation(n)) for n in exponents))


def _classify_blocks(p: int, records: Sequence[ValuationRecord]) -> Tuple[List[BlockReport], List[AnomalyRecord]]:
    """
    Делит записи на блоки n = 4t..4t+3. Блок со сдвигом ровно +1 во всех
    четырёх позициях (t >= 1) считается исключительным, любое другое расхождение считается аномалией.
    """
    groups: Dict[int, List[Optional[ValuationRecord]]] = {}
    for record in records:
        t, offset = divmod(record.n, 4)
        groups.setdefault(t, [None] * 4)[offset] = record

    blocks, anomalies = [], []
    for t in sorted(groups):
        slots = groups[t]
        discrepancies = [None if s is None else s.discrepancy for s in slots]
        if t >= 1 and all(d == 1 for d in discrepancies):
            blocks.append(
                BlockReport(
                    p=p,
                    t=t,
                    valuations=[s.observed for s in slots],
                    irregular_confirmed=is_irregular_index(p, 4 * t),
                )
            )
        elif any(s is not None and s.has_discrepancy for s in slots):
            logger.warning(f"p={p}, t={t}: частичный сдвиг {discrepancies}")
            anomalies.append(
                AnomalyRecord(
                    p=p,
                    t=t,
                    valuations=[None if s is None else s.observed for s in slots],
                    discrepancies=discrepancies,
                )
            )
    return blocks, anomalies


def scan_anomalies(p: int, provider: TableProvider = s_table_mod) -> List[AnomalyRecord]:
    return _classify_blocks(p, scan_mod4(p, provider))[1]


def census_for_prime(p: int, cache_dir: Optional[Path] = None) -> Tuple[List[BlockReport], List[AnomalyRecord]]:
    """Задача воркера: исключительные блоки и аномалии одного простого."""
    with table_provider(cache_dir) as provider:
        return _classify_blocks(p, scan_mod4(p, provider))


def census(
    p_min: int,
    p_max: int,
    threads: int = 1,
    cache_dir: Optional[Path] = None,
) -> Tuple[List[BlockReport], List[AnomalyRecord]]:
    """Блоки и аномалии по всем простым 7 <= p_min <= p <= p_max, по (p, t)."""
    primes = odd_primes_between(max(p_min, 7), p_max)
    results = _fan_out(census_for_prime, primes, threads, cache_dir)
    blocks = [b for found, _ in results for b in found]
    anomalies = [a for _, found in results for a in found]
    blocks.sort(key=lambda b: (b.p, b.t))
    anomalies.sort(key=lambda a: (a.p, a.t))
    return blocks, anomalies


def scan_blocks(
    p_min: int,
    p_max: int,
    threads: int = 1,
    cache_dir: Optional[Path] = None,
) -> List[BlockReport]:
    if p_min > p_max:
        raise InvalidArgumentsError(f"Ожидалось p_min <= p_max, получено {p_min} > {p_max}")
    return census(p_min, p_max, threads, cache_dir)[0]


def check_odd_multiples(
    p: int,
    m_max: Optional[int] = None,
    provider: TableProvider = s_table_mod,
) -> List[ValuationRecord]:
    """
    v_p(G_{m(p-1)}(p)) = 0 для чётных m и 3 для нечётных m, m = 1..m_max
    (по умолчанию m_max = 2p). Предсказание берётся в форме множества нулей:
    0 ⇔ lcm(4, p-1) | n, что при p ≡ 3 mod 4 совпадает с чётностью m.
    """
    require_odd_prime(p)
    if p % 4 != 3 or p < 7:
        raise DomainError(f"Кратные p-1 сканируются для p ≡ 3 mod 4, p >= 7, получено p={p}")
    if m_max is None:
        m_max = 2 * p
    if m_max < 1:
        raise InvalidArgumentsError(f"Ожидалось m_max >= 1, получено {m_max}")
    zero_locus = lcm(4, p - 1)
    exponents = [m * (p - 1) for m in range(1, m_max + 1)]
    table = provider(exponents[-1], p, START_PRECISION)
    valuations = vp_g_batch(p, exponents, table=table)
    return _records(p, valuations, ((n, 0 if n % zero_locus == 0 else 3) for n in exponents))


def p3p5_expected(n: int, p: int) -> int:
    """Замкнутые формулы для p = 3 и p = 5."""
    r = n % 4
    if r == 0:
        return 0
    base = 2 if (p == 3 and r == 3) else r
    return base + sum(int(vp_int(n - j, p)) for j in range(r))


def check_p3p5(p: int, n_max: int, provider: TableProvider = s_table_mod) -> List[ValuationRecord]:
    if p not in (3, 5):
        raise DomainError(f"Замкнутые формулы сканируются только для p = 3 и p = 5, получено p={p}")
    if n_max < 1:
        raise InvalidArgumentsError(f"Ожидалось n_max >= 1, получено {n_max}")
    predicted = [(n, p3p5_expected(n, p)) for n in range(1, n_max + 1)]
    # точность с запасом над прогнозом; обнулившиеся показатели уходят в vp_g
    k = max(START_PRECISION, max(v for _, v in predicted) + 2)
    table = provider(n_max, p, k)
    valuations = vp_g_batch(p, range(1, n_max + 1), k=k, table=table)
    return _records(p, valuations, predicted)


# --- Запуск проверок по диапазону простых ------------------------------------

def is_applicable(check: VerifyCheck, p: int) -> bool:
    """Попадает ли p в область проверки; ALL применим к любому нечётному простому."""
    if check is VerifyCheck.THEOREM1:
        return p % 4 == 1
    if check is VerifyCheck.THEOREM2:
        return p % 4 == 3 and p >= 7
    if check is VerifyCheck.WOLSTENHOLME:
        return p in WOLSTENHOLME_PRIMES
    return True


def theorem_reports_for_prime(
    p: int,
    check: VerifyCheck,
    cache_dir: Optional[Path] = None,
    slow: bool = False,
    n_max: Optional[int] = None,
) -> List[TheoremReport]:
    """Задача воркера: все отчёты проверки check для одного p; n_max только для дихотомии."""
    with table_provider(cache_dir) as provider:
        if check is VerifyCheck.THEOREM1:
            return [check_thm_split(p, provider)]
        if check is VerifyCheck.THEOREM2:
            return [check_thm_inert(p, provider)]
        if check is VerifyCheck.DICHOTOMY:
            return check_dichotomy(p, n_max or 3 * (p - 1), provider=provider)
        if check is VerifyCheck.ENDPOINT:
            return check_endpoint_p2(p, provider)
        if check is VerifyCheck.EVEN_BERNOULLI:
            return check_even_bernoulli(p, provider)
        if check is VerifyCheck.GP_MOD_P2:
            return [check_gp_mod_p2(p, provider)]
        if check is VerifyCheck.WOLSTENHOLME:
            return check_wolstenholme(p, slow)

    reports = []
    for single in VerifyCheck:
        if single is not VerifyCheck.ALL and is_applicable(single, p):
            reports += theorem_reports_for_prime(p, single, cache_dir, slow, n_max)
    return reports


def run_checks(
    check: VerifyCheck,
    primes: Sequence[int],
    threads: int = 1,
    cache_dir: Optional[Path] = None,
    slow: bool = False,
    n_max: Optional[int] = None,
) -> List[TheoremReport]:
    results = _fan_out(
        theorem_reports_for_prime, primes, threads, cache_dir, check=check, slow=slow, n_max=n_max
    )
    return [report for reports in results for report in reports]


def scan_for_prime(
    p: int,
    kind: ScanKind,
    cache_dir: Optional[Path] = None,
    m_max: Optional[int] = None,
    n_max: Optional[int] = None,
) -> List[ValuationRecord]:
    """Задача воркера для сканеров оценок одного простого."""
    with table_provider(cache_dir) as provider:
        if kind is ScanKind.MOD4:
            return scan_mod4(p, provider)
        if kind is ScanKind.ODD_MULTIPLES:
            return check_odd_multiples(p, m_max, provider)
        if kind is ScanKind.P3P5:
            return check_p3p5(p, n_max or P3P5_DEFAULT_N_MAX, provider)
    raise InvalidArgumentsError(f"Сканер {kind.value} не работает по одному простому")


def scan_primes(kind: ScanKind, p_min: int, p_max: int) -> List[int]:
    """Простые диапазона, к которым применим сканер."""
    primes = odd_primes_between(p_min, p_max)
    if kind is ScanKind.P3P5:
        return [p for p in primes if p in (3, 5)]
    if kind is ScanKind.ODD_MULTIPLES:
        return [p for p in primes if p % 4 == 3 and p >= 7]
    return [p for p in primes if p >= 7]


def run_scan(
    kind: ScanKind,
    primes: Sequence[int],
    threads: int = 1,
    cache_dir: Optional[Path] = None,
    m_max: Optional[int] = None,
    n_max: Optional[int] = None,
) -> List[ValuationRecord]:
    results = _fan_out(scan_for_prime, primes, threads, cache_dir, kind=kind, m_max=m_max, n_max=n_max)
    return [record for records in results for record in records]
