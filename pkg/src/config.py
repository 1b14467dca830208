﻿"""Configuracion centralizada del proyecto."""
import hashlib
import json
import os
from functools import lru_cache
from pathlib import Path
from typing import Optional

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


SUBCOMMANDS = ("constants", "local-density", "reduce", "census", "verify")
STOCHASTIC_SUBCOMMANDS = ("constants",)


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file=".env", env_file_encoding="utf-8", extra="ignore")

    # Paralelismo (unica variable de entorno)
    threads: int = Field(default_factory=lambda: os.cpu_count() or 1, alias="CENSUS_THREADS")


@lru_cache()
def get_settings() -> Settings:
    return Settings()


settings = get_settings()


# =============================================================================
# LIMITES DE COMPUTO
# =============================================================================
class Caps(BaseModel):
    """Topes de tamano para enumeraciones exhaustivas."""
    box_cap: int = 2_000_000
    fiber_cap: int = 2_000_000
    level_cap: int = 3
    truncation_cap: int = 8
    trial_division_limit: int = 1_000_000
    rho_budget: int = 200_000
    census_max_n: int = 4

    @field_validator("*")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("todos los topes deben ser positivos")
        return value


class RunConfig(BaseModel):
    """Configuracion de una ejecucion del CLI."""
    subcommand: str
    n: Optional[int] = None
    r: Optional[int] = None
    x: Optional[int] = None
    x_sweep: list[int] = Field(default_factory=list)
    family_path: Optional[Path] = None
    samples: int = 100_000
    seed: Optional[int] = None
    p_max: int = 100_000
    threads: int = Field(default_factory=lambda: settings.threads)
    caps: Caps = Field(default_factory=Caps)
    out: Optional[Path] = None
    csv: Optional[Path] = None

    @field_validator("subcommand")
    @classmethod
    def _known_subcommand(cls, value: str) -> str:
        if value not in SUBCOMMANDS:
            raise ValueError(f"subcomando desconocido: {value}")
        return value

    @field_validator("samples", "p_max", "threads")
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("debe ser positivo")
        return value

    @model_validator(mode="after")
    def _seed_for_sampling(self) -> "RunConfig":
        if self.subcommand in STOCHASTIC_SUBCOMMANDS and self.seed is None:
            raise ValueError(f"'{self.subcommand}' requiere --seed")
        return self

    def config_hash(self) -> str:
        """Hash estable de la configuracion (sin el numero de hilos)."""
        payload = self.model_dump(mode="json", exclude={"threads"})
        raw = json.dumps(payload, sort_keys=True, default=str)
        return hashlib.sha256(raw.encode("utf-8")).hexdigest()[:16]
