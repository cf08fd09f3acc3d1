import logging
from functools import lru_cache
from pathlib import Path

from sqlalchemy import create_engine
from sqlalchemy.engine import Engine
from sqlalchemy.exc import OperationalError
from sqlalchemy.orm import Session, sessionmaker

from app.models.models import Base

logger = logging.getLogger(__name__)

CACHE_FILE_NAME = "stables.sqlite3"


def _get_database_url(cache_dir: Path) -> str:
    return f"sqlite:///{(cache_dir / CACHE_FILE_NAME).resolve()}"


def _create_schema(engine: Engine) -> None:
    try:
        Base.metadata.create_all(engine)
    except OperationalError as e:
        # другой процесс успел создать таблицу между проверкой и CREATE TABLE
        if "already exists" not in str(e):
            raise
        logger.debug(f"Схема кэша уже создана другим процессом: {e}")


@lru_cache(maxsize=None)
def get_engine(cache_dir: Path) -> Engine:
    """
    Движок SQLite в каталоге кэша; схема создаётся при первом обращении.

    Пул соединений закрывается сразу после создания схемы, чтобы дочерние
    процессы пула воркеров не унаследовали открытые соединения.
    """
    cache_dir.mkdir(parents=True, exist_ok=True)
    engine = create_engine(_get_database_url(cache_dir), future=True, echo=False)
    _create_schema(engine)
    engine.dispose()
    return engine


def prepare_cache(cache_dir: Path) -> None:
    """Создаёт каталог и схему кэша в координаторе до раздачи задач воркерам."""
    get_engine(cache_dir)


def get_session_factory(cache_dir: Path) -> sessionmaker:
    return sessionmaker(bind=get_engine(cache_dir), class_=Session, expire_on_commit=False)
