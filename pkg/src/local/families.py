"""
Familias grandes: condiciones de congruencia en un numero finito de primos.

Cada condicion vive en W_0(Z/p^j) y puede ser
    full         sin restriccion
    unit-lambda  lambda(B) unidad en p (todas las entradas de corte unidades)
    inv-in       inv(B) mod p^j en una lista de residuos de U(Z/p^j)
    residues     B mod p^j en una lista explicita de residuos de W_0(Z/p^j)
inv-in admite ademas unit_lambda=True (interseccion con el lugar unidad).
En los primos sin condicion la familia es la completa.
"""
import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Literal, Optional, Sequence, Union

from pydantic import BaseModel, Field, field_validator, model_validator
from sympy import isprime

from src.exactmath.poly import MonicPoly
from src.exactmath.rings import IntegersMod
from src.exceptions import FamilyError
from src.reduction.oracles import p_generators
from src.representation.invariants import inv_coefficients
from src.representation.matrices import ReducibleMatrix, Rows, reducible_coords, slicing_coords

logger = logging.getLogger(__name__)

ConditionKind = Literal["full", "unit-lambda", "inv-in", "residues"]


def _mod(x: Union[int, Fraction], modulus: int) -> int:
    """Reduccion mod p^j de un entero o racional p-entero."""
    return IntegersMod(modulus).coerce(x)


class PrimeCondition(BaseModel):
    p: int
    j: int = 1
    kind: ConditionKind = "full"
    residues: list[tuple[int, ...]] = Field(default_factory=list)
    unit_lambda: bool = False

    @field_validator("p")
    @classmethod
    def _prime(cls, value: int) -> int:
        if not isprime(value):
            raise ValueError(f"{value} no es primo")
        return value

    @field_validator("j")
    @classmethod
    def _level(cls, value: int) -> int:
        if value < 1:
            raise ValueError("el nivel j debe ser >= 1")
        return value

    @model_validator(mode="after")
    def _residues_present(self) -> "PrimeCondition":
        if self.kind in ("inv-in", "residues") and not self.residues:
            raise ValueError(f"la condicion {self.kind} en p={self.p} no tiene residuos")
        m = self.modulus
        self.residues = sorted({tuple(x % m for x in r) for r in self.residues})
        return self

    @property
    def modulus(self) -> int:
        return self.p ** self.j

    # -------------------------------------------------------------------------
    # Pertenencia
    # -------------------------------------------------------------------------
    def admits_poly(self, f: Union[MonicPoly, Sequence]) -> bool:
        """Solo mira inv; para full y unit-lambda toda f es admisible."""
        if self.kind != "inv-in":
            return True
        coeffs = f.exact_coeffs() if isinstance(f, MonicPoly) else f
        return tuple(_mod(c, self.modulus) for c in coeffs) in set(self.residues)

    def admits_rows(self, rows: Rows) -> bool:
        """rows: matriz de W_0 con entradas enteras o racionales p-enteras."""
        n = len(rows)
        if self.kind == "full":
            return True
        if self.kind == "unit-lambda" or self.unit_lambda:
            if any(Fraction(rows[r - 1][c - 1]).numerator % self.p == 0 for r, c in slicing_coords(n)):
                return False
        if self.kind == "inv-in":
            return self.admits_poly(inv_coefficients(rows))
        if self.kind == "residues":
            point = tuple(_mod(rows[r - 1][c - 1], self.modulus) for r, c in reducible_coords(n))
            return point in set(self.residues)
        return True


class FamilySpec(BaseModel):
    name: str = "full"
    conditions: list[PrimeCondition] = Field(default_factory=list)

    @model_validator(mode="after")
    def _one_condition_per_prime(self) -> "FamilySpec":
        primes = [c.p for c in self.conditions]
        if len(primes) != len(set(primes)):
            raise ValueError("hay primos con mas de una condicion")
        return self

    # -------------------------------------------------------------------------
    # Constructores
    # -------------------------------------------------------------------------
    @classmethod
    def full(cls) -> "FamilySpec":
        return cls(name="full")

    @classmethod
    def unit_lambda_at(cls, p: int) -> "FamilySpec":
        return cls(name=f"unit-lambda@{p}", conditions=[PrimeCondition(p=p, kind="unit-lambda")])

    @classmethod
    def inv_in(cls, p: int, residues: Sequence[Sequence[int]], j: int = 1, unit_lambda: bool = False) -> "FamilySpec":
        cond = PrimeCondition(p=p, j=j, kind="inv-in", residues=[tuple(r) for r in residues], unit_lambda=unit_lambda)
        return cls(name=f"inv-in@{p}^{j}", conditions=[cond])

    # -------------------------------------------------------------------------
    # Consultas
    # -------------------------------------------------------------------------
    def condition_at(self, p: int) -> Optional[PrimeCondition]:
        for cond in self.conditions:
            if cond.p == p and cond.kind != "full":
                return cond
        return None

    def conditioned_primes(self) -> list[int]:
        return sorted(c.p for c in self.conditions if c.kind != "full")

    def is_full(self) -> bool:
        return not self.conditioned_primes()

    def admits(self, B: ReducibleMatrix) -> bool:
        """B entera: pertenece a la familia en todos los primos condicionados."""
        return all(c.admits_rows(B.rows) for c in self.conditions)

    def admits_at(self, rows: Rows, p: int) -> bool:
        cond = self.condition_at(p)
        return cond is None or cond.admits_rows(rows)

    def admits_poly_at(self, f: Union[MonicPoly, Sequence], p: int) -> bool:
        cond = self.condition_at(p)
        return cond is None or cond.admits_poly(f)

    def check_invariance(self, n: int) -> None:
        """
        Las condiciones residues deben ser P(Z_p)-invariantes: cada generador
        de P(Z/p^j) manda la lista en si misma. Las demas lo son por definicion.
        """
        coords = reducible_coords(n)
        for cond in self.conditions:
            if cond.kind != "residues":
                continue
            ring = IntegersMod(cond.modulus)
            allowed = set(cond.residues)
            gens = p_generators(n, ring)
            for point in cond.residues:
                if len(point) != len(coords):
                    raise FamilyError(f"residuo {point} no tiene {len(coords)} coordenadas")
                rows = ReducibleMatrix.from_coords(n, point, ring).rows
                for g in gens:
                    image = g.act_rows(rows)
                    if tuple(image[r - 1][c - 1] for r, c in coords) not in allowed:
                        raise FamilyError(f"la condicion en p={cond.p} no es invariante bajo P")
        logger.debug(f"Familia '{self.name}' invariante para n={n}")

    # -------------------------------------------------------------------------
    # JSON
    # -------------------------------------------------------------------------
    def to_json(self) -> dict:
        return self.model_dump(mode="json")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "FamilySpec":
        try:
            with open(path, "r") as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as exc:
            raise FamilyError(f"no se pudo leer la familia {path}: {exc}") from exc
        try:
            return cls.model_validate(data)
        except ValueError as exc:
            raise FamilyError(f"familia invalida en {path}: {exc}") from exc
