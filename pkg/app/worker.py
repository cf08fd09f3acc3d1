"""
Пул воркеров для поэлементных (по простым) вычислений.

Функционал:
- Раздаёт простые числа процессам multiprocessing.Pool; каждая задача
  независима и детерминирована.
- Результаты собираются в порядке входного списка простых, поэтому вывод
  не зависит от числа процессов.
- threads = 1 выполняет задачи в текущем процессе без пула.

Примечание: функция задачи должна быть определена на уровне модуля, чтобы
её можно было передать дочернему процессу.
"""
import logging
import multiprocessing
from functools import partial
from typing import Any, Callable, List, Sequence, TypeVar

logger = logging.getLogger(__name__)

T = TypeVar("T")


def _process_task(task: Callable[..., T], options: dict, p: int) -> T:
    """Обрабатывает одно простое p; исключение пробрасывается координатору."""
    logger.info(f"Обработка p={p}")
    return task(p, **options)


def run_per_prime(
    task: Callable[..., T],
    primes: Sequence[int],
    threads: int = 1,
    **options: Any,
) -> List[T]:
    """Выполняет task(p, **options) для каждого p; порядок результатов = порядок primes."""
    primes = list(primes)
    job = partial(_process_task, task, options)
    if threads <= 1 or len(primes) <= 1:
        return [job(p) for p in primes]
    processes = min(threads, len(primes))
    logger.info(f"Запуск пула из {processes} процессов для {len(primes)} простых")
    with multiprocessing.Pool(processes=processes) as pool:
        # map сохраняет порядок входа независимо от порядка завершения
        return pool.map(job, primes, chunksize=1)
