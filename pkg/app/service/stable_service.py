import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Callable, Iterator, Optional

from sqlalchemy.orm import Session

from app.models.residue import Residue
from app.repository.stable_repository import STableRepository
from app.service.powersum import STable, s_table_mod
from app.shared.db import get_session_factory

logger = logging.getLogger(__name__)

# (n_max, p, k) -> STable, та же сигнатура, что у s_table_mod
TableProvider = Callable[[int, int, int], STable]


class STableService:
    """
    Сервис кэширования таблиц S_j(p-1) mod p^k.

    Таблица из кэша проходит проверку инвариантов; повреждённая запись
    удаляется и строится заново.
    """

    def __init__(self, session: Session):
        self.session = session
        self.stable_repository = STableRepository(session)

    def get_or_build(self, n_max: int, p: int, k: int) -> STable:
        entry = self.stable_repository.find_covering(p, k, n_max)
        if entry is not None:
            table = self._restore(entry.p, entry.k, entry.values, n_max)
            if table is not None:
                logger.debug(f"STable p={p} k={k} n_max={n_max} взята из кэша")
                return table
            logger.warning(f"Запись кэша {entry.id} для p={p} k={k} повреждена, перестраиваем")
            self.stable_repository.delete_by_id(entry.id)

        table = s_table_mod(n_max, p, k)
        if not self.stable_repository.add_table(p, k, n_max, table.ints()):
            logger.debug(f"STable p={p} k={k} n_max={n_max} уже записана другим процессом")
        return table

    @staticmethod
    def _restore(p: int, k: int, raw_values, n_max: int) -> Optional[STable]:
        modulus = p ** k
        try:
            ints = [int(v) for v in raw_values[: n_max + 1]]
        except (TypeError, ValueError):
            return None
        if len(ints) != n_max + 1 or any(not 0 <= v < modulus for v in ints):
            return None
        table = STable(p, k, tuple(Residue(v, modulus) for v in ints))
        return table if table.check_invariants() else None


@contextmanager
def table_provider(cache_dir: Optional[Path]) -> Iterator[TableProvider]:
    """Провайдер таблиц: кэширующий при заданном каталоге, иначе s_table_mod."""
    if cache_dir is None:
        yield s_table_mod
        return
    with get_session_factory(cache_dir)() as session:
        yield STableService(session).get_or_build
