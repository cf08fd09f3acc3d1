from pydantic import BaseModel, Field, ConfigDict, model_validator
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from app.models.gaussint import Valuation
from app.models.models import Command, OutputFormat, ScanKind, TheoremId, VerifyCheck
from app.models.residue import GaussResidue


SCHEMA_VERSION = "v1"


def valuation_to_int(v: Valuation) -> Optional[int]:
    """INFINITE кодируется как None (в CSV пустое поле)."""
    return v.value


class ResidueSchema(BaseModel):
    re: int = Field(..., description="Вещественная компонента по модулю")
    im: int = Field(..., description="Мнимая компонента по модулю")
    modulus: int = Field(..., description="Модуль p^K")

    model_config = ConfigDict(from_attributes=True, frozen=True)

    @classmethod
    def from_residue(cls, g: GaussResidue) -> "ResidueSchema":
        return cls(re=g.re.value, im=g.im.value, modulus=g.modulus)

    def format(self) -> str:
        return f"re={self.re} im={self.im} (mod {self.modulus})"


class ValuationRecord(BaseModel):
    p: int = Field(..., description="Нечётное простое")
    n: int = Field(..., description="Показатель")
    observed: Optional[int] = Field(..., description="Наблюдаемая v_p(G_n(p)); None для INFINITE")
    predicted: int = Field(..., description="Предсказанная оценка")
    discrepancy: Optional[int] = Field(..., description="observed - predicted, если observed конечна")

    model_config = ConfigDict(from_attributes=True, frozen=True)

    @classmethod
    def build(cls, p: int, n: int, observed: Valuation, predicted: int) -> "ValuationRecord":
        value = valuation_to_int(observed)
        return cls(
            p=p,
            n=n,
            observed=value,
            predicted=predicted,
            discrepancy=None if value is None else value - predicted,
        )

    @property
    def has_discrepancy(self) -> bool:
        return self.discrepancy != 0


class BlockReport(BaseModel):
    p: int = Field(..., description="Нечётное простое")
    t: int = Field(..., description="Номер блока: показатели 4t..4t+3")
    valuations: List[int] = Field(..., min_length=4, max_length=4, description="Оценки на 4t..4t+3")
    irregular_confirmed: bool = Field(..., description="S_{4t}(p-1) ≡ 0 mod p^2")

    model_config = ConfigDict(from_attributes=True, frozen=True)


class AnomalyRecord(BaseModel):
    """Частичный сдвиг: часть позиций блока поднята, но не весь блок на +1."""

    p: int
    t: int
    valuations: List[Optional[int]] = Field(..., min_length=4, max_length=4)
    discrepancies: List[Optional[int]] = Field(..., min_length=4, max_length=4)

    model_config = ConfigDict(from_attributes=True, frozen=True)


class TheoremReport(BaseModel):
    p: int = Field(..., description="Нечётное простое")
    theorem_id: TheoremId = Field(..., description="Проверяемое утверждение")
    n: Optional[int] = Field(None, description="Показатель, если проверка поэлементная")
    passed: bool = Field(..., alias="pass", description="lhs = rhs покомпонентно")
    lhs: ResidueSchema
    rhs: ResidueSchema
    detail: Optional[str] = Field(None, description="Дополнительные условия проверки")

    model_config = ConfigDict(from_attributes=True, frozen=True, populate_by_name=True)

    @classmethod
    def compare(
        cls,
        p: int,
        theorem_id: TheoremId,
        lhs: GaussResidue,
        rhs: GaussResidue,
        n: Optional[int] = None,
        extra_ok: bool = True,
        detail: Optional[str] = None,
    ) -> "TheoremReport":
        return cls(
            p=p,
            theorem_id=theorem_id,
            n=n,
            passed=(lhs == rhs) and extra_ok,
            lhs=ResidueSchema.from_residue(lhs),
            rhs=ResidueSchema.from_residue(rhs),
            detail=detail,
        )


Record = Union[ValuationRecord, BlockReport, AnomalyRecord, TheoremReport]


class Summary(BaseModel):
    checked: int
    passed: int
    failed: int


class ReportEnvelope(BaseModel):
    """JSON-отчёт: {schema, command, params, records, summary}."""

    schema_version: str = Field(SCHEMA_VERSION, alias="schema")
    command: str
    params: Dict[str, Any]
    records: List[Dict[str, Any]]
    summary: Summary

    model_config = ConfigDict(populate_by_name=True)


class RunConfig(BaseModel):
    """Параметры одного запуска CLI; обязательные поля проверяются до вычислений."""

    command: Command
    p: Optional[int] = Field(None, ge=2)
    n: Optional[int] = Field(None, ge=0)
    k: Optional[int] = Field(None, ge=1, description="Сторона прямоугольника по a")
    m: Optional[int] = Field(None, ge=1, description="Сторона прямоугольника по b")
    mod_power: Optional[int] = Field(None, description="Показатель K модуля p^K")
    p_min: Optional[int] = None
    p_max: Optional[int] = None
    n_max: Optional[int] = Field(None, ge=1)
    m_max: Optional[int] = Field(None, ge=1)
    which: Optional[Union[VerifyCheck, ScanKind]] = None
    format: OutputFormat = OutputFormat.TEXT
    out: Optional[Path] = None
    threads: int = Field(1, ge=1)
    slow: bool = False
    cache_dir: Optional[Path] = None

    @model_validator(mode="after")
    def _check_required(self) -> "RunConfig":
        if self.mod_power is not None and self.mod_power < 1:
            raise ValueError("K должно быть >= 1")
        if self.command is Command.COMPUTE:
            if self.n is None:
                raise ValueError("compute требует --n")
            if self.p is None and (self.k is None or self.m is None):
                raise ValueError("compute требует --p либо пару --k и --m")
            if self.mod_power is not None and self.p is None:
                raise ValueError("--mod-power требует --p")
        elif self.command is Command.VALUATION:
            if self.n is None or self.p is None:
                raise ValueError("valuation требует --n и --p")
        elif self.command is Command.BERNOULLI:
            if self.n is None:
                raise ValueError("bernoulli требует --n")
            if (self.p is None) != (self.mod_power is None):
                raise ValueError("для вычета нужны оба флага --p и --mod-power")
        elif self.command is Command.VERIFY:
            if not isinstance(self.which, VerifyCheck):
                raise ValueError("verify требует --which")
            if self.p is None and self.p_max is None:
                raise ValueError("verify требует --p или --p-max")
        elif self.command is Command.SCAN:
            if not isinstance(self.which, ScanKind):
                raise ValueError("scan требует --which")
            if self.which in (ScanKind.MOD4, ScanKind.ODD_MULTIPLES, ScanKind.P3P5):
                if self.p is None and self.p_max is None:
                    raise ValueError(f"scan {self.which.value} требует --p или --p-max")
            if self.which in (ScanKind.BLOCKS, ScanKind.ANOMALIES) and self.p_max is None:
                raise ValueError(f"scan {self.which.value} требует --p-max")
            if self.which is ScanKind.P3P5 and self.p not in (None, 3, 5):
                raise ValueError("scan p3p5 допускает только p = 3 или p = 5")
        if self.p_max is not None and self.p_max > 2000 and not self.slow:
            raise ValueError("p_max > 2000 доступен только с --slow")
        return self

    def report_params(self) -> Dict[str, Any]:
        """Параметры для отчёта: без threads/out/cache, чтобы вывод не зависел от них."""
        return self.model_dump(
            mode="json",
            exclude={"command", "format", "out", "threads", "cache_dir"},
            exclude_none=True,
        )
