"""
Настройки запуска из окружения (и файла app/.env, если он есть).

GPS_CACHE_DIR          каталог кэша STable (по умолчанию ./.gps-cache)
GPS_CACHE_DISABLED     "1" отключает кэш
GPS_LOG_LEVEL          уровень логирования (WARNING)
GPS_THREADS            число процессов-воркеров (число CPU)
GPS_VALUATION_CEILING  потолок точности K для адаптивной оценки (64)
"""
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from dotenv import load_dotenv

DEFAULT_PRECISION_CEILING = 64


def _load_env() -> None:
    env_path = Path(__file__).resolve().parents[1] / ".env"
    if env_path.exists():
        try:
            load_dotenv(env_path)
        except Exception:
            pass


@dataclass(frozen=True)
class Settings:
    cache_dir: Optional[Path]
    log_level: str
    threads: int
    valuation_ceiling: int


def get_settings() -> Settings:
    _load_env()
    disabled = os.getenv("GPS_CACHE_DISABLED", "0") == "1"
    return Settings(
        cache_dir=None if disabled else Path(os.getenv("GPS_CACHE_DIR", ".gps-cache")),
        log_level=os.getenv("GPS_LOG_LEVEL", "WARNING").upper(),
        threads=max(1, int(os.getenv("GPS_THREADS", str(os.cpu_count() or 1)))),
        valuation_ceiling=int(os.getenv("GPS_VALUATION_CEILING", str(DEFAULT_PRECISION_CEILING))),
    )
