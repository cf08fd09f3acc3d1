"""
Командная строка: compute, valuation, verify, scan, bernoulli.

Коды завершения:
  0  успех
  1  нарушена проверка теоремы (или непредвиденная ошибка)
  2  неверные аргументы или p вне области утверждения
  3  сканер зафиксировал расхождение с гипотезой
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from pydantic import ValidationError

from app.models.models import Command, OutputFormat, ScanKind, VerifyCheck
from app.service import verify
from app.service.bernoulli import bernoulli_exact, bernoulli_mod
from app.service.gsum import f_factored, g_exact, g_mod, vp_g
from app.service.report_service import render_csv, render_json, write_report
from app.shared.config import Settings
from app.shared.errors import (
    BernoulliUndefinedError,
    DomainError,
    GaussPowerSumError,
    InvalidArgumentsError,
    PDividesDenominatorError,
    ZeroSumError,
)
from app.shared.primes import odd_primes_between, require_odd_prime
from app.shemas.report_shemas import AnomalyRecord, BlockReport, RunConfig, TheoremReport, ValuationRecord

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_THEOREM_FAILURE = 1
EXIT_USAGE = 2
EXIT_DISCREPANCY = 3

USAGE_ERRORS = (DomainError, InvalidArgumentsError, PDividesDenominatorError, BernoulliUndefinedError)


def build_parser(settings: Settings) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, help="нечётное простое p")
    common.add_argument("--n", type=int, help="показатель n")
    common.add_argument("--k", type=int, help="сторона прямоугольника по a")
    common.add_argument("--m", type=int, help="сторона прямоугольника по b")
    common.add_argument("--mod-power", type=int, dest="mod_power", help="показатель K модуля p^K")
    common.add_argument("--p-min", type=int, dest="p_min", help="нижняя граница диапазона простых")
    common.add_argument("--p-max", type=int, dest="p_max", help="верхняя граница диапазона простых")
    common.add_argument("--n-max", type=int, dest="n_max", help="наибольший показатель n")
    common.add_argument("--m-max", type=int, dest="m_max", help="наибольший множитель m")
    common.add_argument(
        "--format", choices=[f.value.lower() for f in OutputFormat], default="text", help="формат вывода"
    )
    common.add_argument("--out", type=Path, help="файл отчёта (по умолчанию stdout)")
    common.add_argument("--threads", type=int, default=settings.threads, help="число процессов")
    common.add_argument("--slow", action="store_true", help="разрешить тяжёлые диапазоны")
    common.add_argument("--cache-dir", type=Path, dest="cache_dir", default=settings.cache_dir)
    common.add_argument("--no-cache", action="store_true", dest="no_cache", help="не использовать кэш STable")
    common.add_argument(
        "--log-level",
        dest="log_level",
        type=str.upper,
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        default=settings.log_level,
    )

    parser = argparse.ArgumentParser(
        prog="gps",
        description="Гауссовы степенные суммы: вычисление, проверка сравнений, сканирование оценок",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("compute", parents=[common], help="F_n(k,m), G_n(p) или G_n(p) mod p^K")
    sub.add_parser("valuation", parents=[common], help="v_p(G_n(p))")
    sub.add_parser("bernoulli", parents=[common], help="B_n точно или по модулю p^K")
    verify_parser = sub.add_parser("verify", parents=[common], help="проверка теорем")
    verify_parser.add_argument("--which", choices=[c.value for c in VerifyCheck], required=True)
    scan_parser = sub.add_parser("scan", parents=[common], help="сканирование гипотез об оценках")
    scan_parser.add_argument("--which", choices=[s.value for s in ScanKind], required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = Command(args.command.upper())
    which = None
    if command is Command.VERIFY:
        which = VerifyCheck(args.which)
    elif command is Command.SCAN:
        which = ScanKind(args.which)
    return RunConfig(
        command=command,
        p=args.p,
        n=args.n,
        k=args.k,
        m=args.m,
        mod_power=args.mod_power,
        p_min=args.p_min,
        p_max=args.p_max,
        n_max=args.n_max,
        m_max=args.m_max,
        which=which,
        format=OutputFormat(args.format.upper()),
        out=args.out,
        threads=args.threads,
        slow=args.slow,
        cache_dir=None if args.no_cache else args.cache_dir,
    )


def _emit_lines(lines: List[str], config: RunConfig) -> None:
    write_report("".join(f"{line}\n" for line in lines), config.out)


def cmd_compute(config: RunConfig, settings: Settings) -> int:
    if config.k is not None and config.m is not None:
        value = f_factored(config.n, config.k, config.m)
        _emit_lines([value.format()], config)
        return EXIT_OK
    require_odd_prime(config.p)
    if config.mod_power is not None:
        _emit_lines([g_mod(config.n, config.p, config.mod_power).format()], config)
    else:
        _emit_lines([g_exact(config.n, config.p).format()], config)
    return EXIT_OK


def cmd_valuation(config: RunConfig, settings: Settings) -> int:
    require_odd_prime(config.p)
    try:
        valuation = vp_g(config.n, config.p, settings.valuation_ceiling)
    except ZeroSumError as e:
        print(f"G_{config.n}({config.p}) = 0: {e}", file=sys.stderr)
        return EXIT_THEOREM_FAILURE
    _emit_lines([str(valuation)], config)
    return EXIT_OK


def cmd_bernoulli(config: RunConfig, settings: Settings) -> int:
    if config.n < 0:
        raise InvalidArgumentsError(f"Ожидалось n >= 0, получено {config.n}")
    if config.p is None:
        _emit_lines([str(bernoulli_exact(config.n))], config)
    else:
        require_odd_prime(config.p)
        _emit_lines([str(bernoulli_mod(config.n, config.p, config.mod_power))], config)
    return EXIT_OK


def _primes_for(config: RunConfig, default_min: int = 3) -> List[int]:
    return odd_primes_between(config.p_min if config.p_min is not None else default_min, config.p_max)


def _render(config: RunConfig, records: Sequence, record_type: type, text_lines: List[str]) -> None:
    if config.format is OutputFormat.CSV:
        write_report(render_csv(records, record_type), config.out)
    elif config.format is OutputFormat.JSON:
        write_report(render_json(config.command.value.lower(), config.report_params(), records), config.out)
    else:
        _emit_lines(text_lines, config)


def cmd_verify(config: RunConfig, settings: Settings) -> int:
    check = config.which
    if config.p is not None:
        # явное p вне области проверки даёт DomainError из самой проверки
        primes = [require_odd_prime(config.p)]
    else:
        primes = [p for p in _primes_for(config) if verify.is_applicable(check, p)]
    if not primes:
        raise InvalidArgumentsError(f"В диапазоне нет простых, подходящих для проверки {check.value}")

    reports = verify.run_checks(
        check, primes, config.threads, config.cache_dir, config.slow, n_max=config.n_max
    )
    failed = [r for r in reports if not r.passed]
    for report in failed:
        logger.warning(f"Нарушено {report.theorem_id.value} при p={report.p}, n={report.n}")

    if failed:
        summary = f"{len(primes)} primes checked, {len(failed)} failed"
    else:
        summary = f"{len(primes)} primes checked, all pass"
    text = [
        f"FAIL p={r.p} {r.theorem_id.value} n={r.n}: lhs {r.lhs.format()} rhs {r.rhs.format()}"
        for r in failed
    ]
    _render(config, reports, TheoremReport, text + [summary])
    return EXIT_THEOREM_FAILURE if failed else EXIT_OK


def _valuation_lines(records: Sequence[ValuationRecord]) -> List[str]:
    return [
        f"p={r.p} n={r.n} observed={'inf' if r.observed is None else r.observed} "
        f"predicted={r.predicted} discrepancy={'' if r.discrepancy is None else r.discrepancy}"
        for r in records
    ]


def _scan_valuations(config: RunConfig) -> int:
    kind = config.which
    if config.p is not None:
        primes = [config.p]
    else:
        primes = verify.scan_primes(kind, config.p_min if config.p_min is not None else 3, config.p_max)
    records = verify.run_scan(kind, primes, config.threads, config.cache_dir, config.m_max, config.n_max)
    _render(config, records, ValuationRecord, _valuation_lines(records))
    return EXIT_DISCREPANCY if any(r.has_discrepancy for r in records) else EXIT_OK


def _scan_census(config: RunConfig) -> int:
    p_min = config.p_min if config.p_min is not None else 7
    blocks, anomalies = verify.census(p_min, config.p_max, config.threads, config.cache_dir)
    if config.which is ScanKind.ANOMALIES:
        lines = [f"p={a.p} t={a.t} valuations={a.valuations} discrepancies={a.discrepancies}" for a in anomalies]
        _render(config, anomalies, AnomalyRecord, lines)
        return EXIT_DISCREPANCY if anomalies else EXIT_OK

    lines = [
        f"p={b.p} t={b.t} valuations={b.valuations} irregular_confirmed={str(b.irregular_confirmed).lower()}"
        for b in blocks
    ]
    _render(config, blocks, BlockReport, lines)
    discrepancy = any(not b.irregular_confirmed for b in blocks)
    if config.p_max < verify.KNOWN_BLOCKS_BOUND:
        found = [(b.p, b.t) for b in blocks]
        expected = verify.known_blocks(p_min, config.p_max)
        if found != expected:
            logger.warning(f"Найденные блоки {found} не совпадают с известными {expected}")
            discrepancy = True
    return EXIT_DISCREPANCY if discrepancy else EXIT_OK


def cmd_scan(config: RunConfig, settings: Settings) -> int:
    if config.which in (ScanKind.BLOCKS, ScanKind.ANOMALIES):
        return _scan_census(config)
    return _scan_valuations(config)


COMMANDS = {
    Command.COMPUTE: cmd_compute,
    Command.VALUATION: cmd_valuation,
    Command.VERIFY: cmd_verify,
    Command.SCAN: cmd_scan,
    Command.BERNOULLI: cmd_bernoulli,
}


def dispatch(args: argparse.Namespace, settings: Settings) -> int:
    """Выполняет разобранную команду и переводит ошибки в коды завершения."""
    try:
        config = config_from_args(args)
    except ValidationError as e:
        messages = "; ".join(err["msg"] for err in e.errors())
        print(f"Неверные аргументы: {messages}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return COMMANDS[config.command](config, settings)
    except USAGE_ERRORS as e:
        print(str(e), file=sys.stderr)
        return EXIT_USAGE
    except GaussPowerSumError as e:
        logger.exception(f"Ошибка вычисления: {e}")
        return EXIT_THEOREM_FAILURE
    except OSError as e:
        logger.exception(f"Ошибка файловой системы при записи отчёта: {e}")
        return EXIT_THEOREM_FAILURE
    except Exception as e:
        logger.exception(f"Непредвиденная ошибка: {e}")
        return EXIT_THEOREM_FAILURE


def run(argv: Optional[Sequence[str]], settings: Settings) -> int:
    return dispatch(build_parser(settings).parse_args(argv), settings)
