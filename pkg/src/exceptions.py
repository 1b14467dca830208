"""Errores del proyecto."""


class OrbitCountError(Exception):
    """Base de todos los errores del paquete."""


class DegenerateInput(OrbitCountError):
    """Polinomio o matriz con discriminante cero."""


class HalvingError(OrbitCountError):
    """Division por 2 imposible en el anillo."""


class RingTooSmall(OrbitCountError):
    """El anillo no tiene suficientes puntos para interpolar."""


class LengthMismatch(OrbitCountError):
    pass


class NotASquare(OrbitCountError):
    pass


class NonUnitDiscriminant(OrbitCountError):
    pass


class ZeroSliceEntry(OrbitCountError):
    """Alguna entrada b_{i(n-i)} es cero."""


class BoxTooLarge(OrbitCountError):
    pass


class LevelTooDeep(OrbitCountError):
    pass


class StabilizationFailure(OrbitCountError):
    """Conteos truncados que no se estabilizan al subir de nivel."""


class InstanceTooLarge(OrbitCountError):
    pass


class InvalidParity(OrbitCountError):
    """Numero de raices reales incompatible con la paridad de n."""


class FactorizationTimeout(OrbitCountError):
    pass


class FamilyError(OrbitCountError):
    """Familia mal definida o ruta no disponible para la familia."""


class UsageError(OrbitCountError):
    pass
