"""
Anillos de coeficientes: Z, Q, Z/m, Z_p truncado a p^k y R (float64).

Los elementos son valores planos de Python (int, Fraction, float); el
RingTag sabe normalizarlos y operar con ellos.
"""
import math
from enum import Enum
from fractions import Fraction
from typing import Iterator, Optional, Union

from pydantic import BaseModel, ConfigDict
from sympy import isprime, mod_inverse, multiplicity, sqrt_mod

from src.exceptions import HalvingError, NotASquare

Scalar = Union[int, Fraction, float]


class RingKind(str, Enum):
    INTEGERS = "ZZ"
    RATIONALS = "QQ"
    INTEGERS_MOD = "ZZmod"
    PADIC_TRUNC = "Zp"
    REALS = "RR"


def padic_val(x: Union[int, Fraction], p: int) -> Union[int, float]:
    """v_p(x); v_p(0) = math.inf."""
    if x == 0:
        return math.inf
    x = Fraction(x)
    return int(multiplicity(p, abs(x.numerator))) - int(multiplicity(p, x.denominator))


class RingTag(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: RingKind
    modulus: Optional[int] = None
    p: Optional[int] = None
    k: Optional[int] = None

    # -------------------------------------------------------------------------
    # Propiedades
    # -------------------------------------------------------------------------
    @property
    def name(self) -> str:
        if self.kind is RingKind.INTEGERS_MOD:
            return f"ZZ/{self.modulus}"
        if self.kind is RingKind.PADIC_TRUNC:
            return f"Zp({self.p},{self.k})"
        return self.kind.value

    @property
    def is_modular(self) -> bool:
        return self.kind in (RingKind.INTEGERS_MOD, RingKind.PADIC_TRUNC)

    @property
    def is_exact(self) -> bool:
        return self.kind is not RingKind.REALS

    @property
    def is_field(self) -> bool:
        if self.kind in (RingKind.RATIONALS, RingKind.REALS):
            return True
        return self.is_modular and isprime(self.modulus)

    @property
    def characteristic(self) -> int:
        return self.modulus if self.is_modular else 0

    @property
    def size(self) -> Optional[int]:
        return self.modulus if self.is_modular else None

    def elements(self) -> Iterator[int]:
        if not self.is_modular:
            raise ValueError(f"{self.name} no es finito")
        return iter(range(self.modulus))

    # -------------------------------------------------------------------------
    # Aritmetica
    # -------------------------------------------------------------------------
    def coerce(self, x) -> Scalar:
        """Lleva x (int, Fraction, float o texto) a la forma normal del anillo."""
        if isinstance(x, str):
            x = self.parse(x)
        if self.kind is RingKind.INTEGERS:
            q = Fraction(x)
            if q.denominator != 1:
                raise ValueError(f"{x} no es entero")
            return q.numerator
        if self.kind is RingKind.RATIONALS:
            return Fraction(x)
        if self.kind is RingKind.REALS:
            return float(x)
        q = Fraction(x)
        if q.denominator == 1:
            return q.numerator % self.modulus
        return (q.numerator * mod_inverse(q.denominator, self.modulus)) % self.modulus

    def reduce(self, x: Scalar) -> Scalar:
        if self.is_modular:
            return x % self.modulus
        return x

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind is RingKind.RATIONALS:
            return Fraction(a) / b
        if self.kind is RingKind.REALS:
            return a / b
        if self.kind is RingKind.INTEGERS:
            if b == 0 or a % b != 0:
                raise ZeroDivisionError(f"{a}/{b} no es entero")
            return a // b
        if math.gcd(b % self.modulus, self.modulus) != 1:
            raise ZeroDivisionError(f"{b} no es unidad en {self.name}")
        return (a * mod_inverse(b, self.modulus)) % self.modulus

    def inverse(self, a: Scalar) -> Scalar:
        return self.div(self.one, a)

    def half(self, a: Scalar) -> Scalar:
        """a/2; en Z/2^k devuelve el levantamiento canonico (a mod m)//2."""
        if self.kind is RingKind.RATIONALS:
            return Fraction(a) / 2
        if self.kind is RingKind.REALS:
            return a / 2
        if self.kind is RingKind.INTEGERS:
            if a % 2:
                raise HalvingError(f"{a} es impar")
            return a // 2
        m = self.modulus
        if m % 2:
            return (a * mod_inverse(2, m)) % m
        if a % 2:
            raise HalvingError(f"{a} es impar en {self.name}")
        return (a % m) // 2

    def is_unit(self, a: Scalar) -> bool:
        if self.kind is RingKind.INTEGERS:
            return a in (1, -1)
        if self.is_modular:
            return math.gcd(a % self.modulus, self.modulus) == 1
        return a != 0

    def is_zero(self, a: Scalar) -> bool:
        return self.reduce(a) == 0

    def sqrt(self, a: Scalar) -> Scalar:
        """Alguna raiz cuadrada de a en el anillo, o NotASquare."""
        if self.kind is RingKind.REALS:
            if a < 0:
                raise NotASquare(f"{a} < 0")
            return math.sqrt(a)
        if self.is_modular:
            root = sqrt_mod(a % self.modulus, self.modulus)
            if root is None:
                raise NotASquare(f"{a} no es cuadrado en {self.name}")
            return root
        q = Fraction(a)
        if q < 0:
            raise NotASquare(f"{a} < 0")
        num, den = math.isqrt(q.numerator), math.isqrt(q.denominator)
        if num * num != q.numerator or den * den != q.denominator:
            raise NotASquare(f"{a} no es cuadrado en {self.name}")
        return self.coerce(Fraction(num, den))

    def valuation(self, a: Scalar) -> Union[int, float]:
        """Valuacion p-adica; en Z_p truncado queda acotada por k."""
        if self.kind is not RingKind.PADIC_TRUNC:
            raise ValueError(f"{self.name} no tiene valuacion")
        v = padic_val(a % self.modulus, self.p)
        return min(v, self.k) if v != math.inf else self.k

    @property
    def zero(self) -> Scalar:
        return self.coerce(0)

    @property
    def one(self) -> Scalar:
        return self.coerce(1)

    # -------------------------------------------------------------------------
    # Serializacion
    # -------------------------------------------------------------------------
    def to_str(self, a: Scalar) -> str:
        if self.kind is RingKind.REALS:
            return repr(float(a))
        q = Fraction(a)
        return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"

    def parse(self, text: str) -> Scalar:
        text = text.strip()
        if self.kind is RingKind.REALS:
            return float(text)
        return self.coerce(Fraction(text))


def Integers() -> RingTag:
    return RingTag(kind=RingKind.INTEGERS)


def Rationals() -> RingTag:
    return RingTag(kind=RingKind.RATIONALS)


def Reals() -> RingTag:
    return RingTag(kind=RingKind.REALS)


def IntegersMod(m: int) -> RingTag:
    if m < 1:
        raise ValueError("el modulo debe ser positivo")
    return RingTag(kind=RingKind.INTEGERS_MOD, modulus=m)


def PadicTrunc(p: int, k: int) -> RingTag:
    if not isprime(p) or k < 1:
        raise ValueError(f"Zp({p},{k}) invalido")
    return RingTag(kind=RingKind.PADIC_TRUNC, modulus=p ** k, p=p, k=k)


ZZ = Integers()
QQ = Rationals()
RR = Reals()


def ring_from_name(name: str) -> RingTag:
    """Inverso de RingTag.name: 'ZZ', 'QQ', 'RR', 'ZZ/m', 'Zp(p,k)'."""
    name = name.replace(" ", "")
    if name in ("ZZ", "QQ", "RR"):
        return {"ZZ": ZZ, "QQ": QQ, "RR": RR}[name]
    if name.startswith("ZZ/"):
        return IntegersMod(int(name[3:]))
    if name.startswith("Zp(") and name.endswith(")"):
        p, k = name[3:-1].split(",")
        return PadicTrunc(int(p), int(k))
    raise ValueError(f"anillo desconocido: {name}")
