from typing import List, Optional

from sqlalchemy import delete, insert, select
from sqlalchemy.exc import IntegrityError
from sqlalchemy.orm import Session

from app.models.models import STableEntry


class STableRepository:
    """
    Репозиторий для операций над кэшем таблиц STable.
    """

    def __init__(self, session: Session):
        self.session = session

    def add_table(self, p: int, k: int, n_max: int, values: List[int]) -> bool:
        """
        Запись таблицы в кэш. Значения хранятся десятичными строками.

        Возвращает False, если запись с таким ключом уже создана другим процессом.
        """
        stmt = insert(STableEntry).values(
            p=p,
            k=k,
            n_max=n_max,
            values=[str(v) for v in values],
        )
        try:
            self.session.execute(stmt)
            self.session.commit()
        except IntegrityError:
            self.session.rollback()
            return False
        return True

    def get_by_key(self, p: int, k: int, n_max: int) -> Optional[STableEntry]:
        """
        Получение таблицы по ключу (p, k, n_max).
        """
        query = select(STableEntry).where(
            STableEntry.p == p, STableEntry.k == k, STableEntry.n_max == n_max
        )
        result = self.session.execute(query)
        return result.scalar_one_or_none()

    def find_covering(self, p: int, k: int, n_max: int) -> Optional[STableEntry]:
        """
        Наименьшая таблица с тем же (p, k) и n_max не меньше запрошенного.
        """
        query = (
            select(STableEntry)
            .where(STableEntry.p == p, STableEntry.k == k, STableEntry.n_max >= n_max)
            .order_by(STableEntry.n_max)
            .limit(1)
        )
        result = self.session.execute(query)
        return result.scalar_one_or_none()

    def delete_by_id(self, entry_id: int) -> None:
        self.session.execute(delete(STableEntry).where(STableEntry.id == entry_id))
        self.session.commit()
