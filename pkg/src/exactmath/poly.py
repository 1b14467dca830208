"""Polinomios monicos U(R): discriminante, resultante y conteo de raices reales."""
from fractions import Fraction
from typing import Sequence

from pydantic import BaseModel, ConfigDict, field_validator, model_validator
from sympy import Matrix, Poly, QQ as SQQ, Rational, symbols
from sympy.polys.subresultants_qq_zz import sylvester

from src.exactmath.rings import QQ, RR, ZZ, RingTag, Scalar, ring_from_name
from src.exceptions import DegenerateInput, LengthMismatch

X = symbols("x")


class MonicPoly(BaseModel):
    """f(x) = x^n + f_1 x^{n-1} + ... + f_n con coeficientes en ring."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int
    coeffs: tuple
    ring: RingTag = QQ

    @field_validator("n")
    @classmethod
    def _degree(cls, value: int) -> int:
        if value < 3:
            raise ValueError(f"grado {value} < 3")
        return value

    @model_validator(mode="after")
    def _normalize(self) -> "MonicPoly":
        if len(self.coeffs) != self.n:
            raise LengthMismatch(f"se esperaban {self.n} coeficientes, hay {len(self.coeffs)}")
        object.__setattr__(self, "coeffs", tuple(self.ring.coerce(c) for c in self.coeffs))
        return self

    @classmethod
    def of(cls, coeffs: Sequence, ring: RingTag = ZZ) -> "MonicPoly":
        return cls(n=len(coeffs), coeffs=tuple(coeffs), ring=ring)

    @classmethod
    def monomial(cls, n: int, ring: RingTag = ZZ) -> "MonicPoly":
        return cls(n=n, coeffs=(0,) * n, ring=ring)

    def coeff(self, i: int) -> Scalar:
        """f_i (coeficiente de x^{n-i}); f_0 = 1."""
        return self.ring.one if i == 0 else self.coeffs[i - 1]

    def over(self, ring: RingTag) -> "MonicPoly":
        return MonicPoly(n=self.n, coeffs=tuple(ring.coerce(c) for c in self.exact_coeffs()), ring=ring)

    def exact_coeffs(self) -> tuple:
        """Coeficientes como racionales exactos (los float se toman como diadicos)."""
        return tuple(Fraction(c) for c in self.coeffs)

    def to_sympy(self) -> Poly:
        return Poly([1, *(Rational(c.numerator, c.denominator) for c in self.exact_coeffs())], X, domain=SQQ)

    def __call__(self, x):
        value = 1
        for c in self.coeffs:
            value = value * x + c
        return self.ring.reduce(value)

    # -------------------------------------------------------------------------
    # JSON
    # -------------------------------------------------------------------------
    def to_json(self) -> dict:
        return {"n": self.n, "ring": self.ring.name, "coeffs": [self.ring.to_str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data: dict) -> "MonicPoly":
        ring = ring_from_name(data.get("ring", "ZZ"))
        return cls(n=int(data["n"]), coeffs=tuple(ring.parse(str(c)) for c in data["coeffs"]), ring=ring)


def _exact_disc(f: MonicPoly) -> Fraction:
    # sympy calcula Res(f, f') por la sucesion de subresultantes
    value = f.to_sympy().discriminant()
    return Fraction(int(value.p), int(value.q))


def poly_disc(f: MonicPoly) -> Scalar:
    """disc(f) = (-1)^{n(n-1)/2} Res(f, f') en el anillo de f."""
    return f.ring.coerce(_exact_disc(f)) if f.ring != RR else float(_exact_disc(f))


def is_degenerate(f: MonicPoly) -> bool:
    if f.ring.is_modular:
        return poly_disc(f) == 0
    return _exact_disc(f) == 0


def sylvester_resultant(f: Poly, g: Poly) -> Fraction:
    """Res(f, g) como determinante de la matriz de Sylvester (oraculo lento)."""
    matrix = Matrix(sylvester(f.as_expr(), g.as_expr(), X))
    value = matrix.det(method="bareiss")
    return Fraction(int(Rational(value).p), int(Rational(value).q))


def sylvester_disc(f: MonicPoly) -> Fraction:
    n = f.n
    sf = f.to_sympy()
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * sylvester_resultant(sf, sf.diff(X))


def sturm_real_roots(f: MonicPoly) -> int:
    """Numero de raices reales distintas de f por sucesion de Sturm en +-inf."""
    if f.ring not in (QQ, RR, ZZ):
        raise ValueError(f"Sturm requiere un anillo ordenado, no {f.ring.name}")
    if _exact_disc(f) == 0:
        raise DegenerateInput("disc(f) = 0")
    sequence = f.to_sympy().sturm()

    def _changes(signs: list[int]) -> int:
        signs = [s for s in signs if s != 0]
        return sum(1 for a, b in zip(signs, signs[1:]) if a != b)

    at_plus = [1 if p.LC() > 0 else -1 for p in sequence if not p.is_zero]
    at_minus = [s * (-1 if p.degree() % 2 else 1) for s, p in zip(at_plus, sequence) if not p.is_zero]
    return _changes(at_minus) - _changes(at_plus)
