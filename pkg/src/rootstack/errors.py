"""Exception hierarchy shared by every module of the package."""


class RootStackError(Exception):
    """Base class for domain errors.

    ``location`` is a free-form hint (lattice point, matrix slot, ...) that the
    CLI copies into its structured error report.
    """

    def __init__(self, message: str = "", location=None):
        super().__init__(message)
        self.location = location

    @property
    def name(self) -> str:
        return type(self).__name__


class IllFormedMap(RootStackError):
    pass


class NotSquarefree(RootStackError):
    pass


class NotSupportedOnDivisor(RootStackError):
    pass


class NotInvertible(RootStackError):
    pass


class NoSolution(RootStackError):
    pass


class InvalidDiagram(RootStackError):
    pass


class InvalidPair(RootStackError):
    pass


class CoprimalityViolation(RootStackError):
    pass


class SupportViolation(RootStackError):
    pass


class NotInKernel(RootStackError):
    pass


class GradingViolation(RootStackError):
    pass


class MismatchedClass(RootStackError):
    pass


class BadCharacteristic(RootStackError):
    pass


class ClosureCap(RootStackError):
    pass


class WildCharacteristic(RootStackError):
    pass


class GeneratedByReflectionsViolation(RootStackError):
    pass


class SchemaError(RootStackError):
    """Malformed input document (the CLI maps this to exit status 2)."""
