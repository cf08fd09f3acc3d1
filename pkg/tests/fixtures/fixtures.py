"""
Pytest fixtures for testing.
"""
from pathlib import Path
from typing import Generator

import pytest
from sqlalchemy import create_engine
from sqlalchemy.orm import Session, sessionmaker

from app.models.models import Base
from app.shared.config import Settings


@pytest.fixture
def test_db_session() -> Generator[Session, None, None]:
    """Create a test database session."""
    # Use in-memory SQLite for testing
    engine = create_engine("sqlite:///:memory:", echo=False)

    # Create tables
    Base.metadata.create_all(engine)

    session_factory = sessionmaker(engine, class_=Session, expire_on_commit=False)
    with session_factory() as session:
        yield session

    engine.dispose()


@pytest.fixture
def cache_dir(tmp_path: Path) -> Path:
    """Temporary STable cache directory."""
    return tmp_path / "gps-cache"


@pytest.fixture
def test_settings(cache_dir: Path) -> Settings:
    """Settings independent of the developer's environment."""
    return Settings(cache_dir=cache_dir, log_level="WARNING", threads=1, valuation_ceiling=64)


@pytest.fixture
def golden_valuations() -> dict:
    """Observed v_p(G_n(p)) for n = 1..p-2."""
    return {
        7: [1, 2, 3, 1, 2],
        11: [1, 2, 3, 1, 2, 3, 4, 1, 2],
        13: [1, 2, 3, 1, 2, 3, 4, 1, 2, 3, 4],
    }


@pytest.fixture
def golden_mod_p2() -> list:
    """(p, n, re, im) of G_n(p) mod p^2."""
    return [
        (7, 1, 28, 28),
        (7, 4, 7, 0),
        (7, 6, 0, 0),
        (7, 7, 0, 0),
        (11, 1, 66, 66),
        (11, 4, 33, 0),
        (11, 8, 33, 0),
        (11, 10, 0, 0),
        (11, 11, 0, 0),
        (13, 1, 91, 91),
        (13, 4, 91, 0),
        (13, 8, 91, 0),
        (13, 12, 119, 0),
        (13, 13, 0, 0),
    ]
