import enum

from sqlalchemy import (
    Column, DateTime, func, Integer, JSON, UniqueConstraint,
)
from sqlalchemy.orm import declarative_base


Base = declarative_base()


class LocationClass(str, enum.Enum):
    REAL = "REAL"
    IMAGINARY = "IMAGINARY"
    DIAGONAL = "DIAGONAL"
    ANTIDIAGONAL = "ANTIDIAGONAL"


class TheoremId(str, enum.Enum):
    SPLIT_P3 = "SPLIT_P3"
    INERT_P6 = "INERT_P6"
    DICHOTOMY = "DICHOTOMY"
    ENDPOINT_P2 = "ENDPOINT_P2"
    EVEN_BERNOULLI = "EVEN_BERNOULLI"
    GP_MOD_P2 = "GP_MOD_P2"
    WOLSTENHOLME = "WOLSTENHOLME"


class Command(str, enum.Enum):
    COMPUTE = "COMPUTE"
    VALUATION = "VALUATION"
    VERIFY = "VERIFY"
    SCAN = "SCAN"
    BERNOULLI = "BERNOULLI"


class OutputFormat(str, enum.Enum):
    TEXT = "TEXT"
    CSV = "CSV"
    JSON = "JSON"


class VerifyCheck(str, enum.Enum):
    THEOREM1 = "theorem1"
    THEOREM2 = "theorem2"
    DICHOTOMY = "dichotomy"
    ENDPOINT = "endpoint"
    EVEN_BERNOULLI = "even-bernoulli"
    GP_MOD_P2 = "gp-mod-p2"
    WOLSTENHOLME = "wolstenholme"
    ALL = "all"


class ScanKind(str, enum.Enum):
    MOD4 = "mod4"
    BLOCKS = "blocks"
    ODD_MULTIPLES = "odd-multiples"
    P3P5 = "p3p5"
    ANOMALIES = "anomalies"


class STableEntry(Base):
    """Кэш таблиц S_j(p-1) mod p^k; запись создаётся один раз на ключ (p, k, n_max)."""

    __tablename__ = "stables"
    __table_args__ = (UniqueConstraint("p", "k", "n_max", name="uq_stables_key"),)

    id = Column(Integer, primary_key=True, autoincrement=True)
    p = Column(Integer, nullable=False)
    k = Column(Integer, nullable=False)
    n_max = Column(Integer, nullable=False)
    # десятичные строки: значения по модулю p^k не помещаются в JSON-числа
    values = Column(JSON, nullable=False)
    created_at = Column(DateTime, server_default=func.now())
