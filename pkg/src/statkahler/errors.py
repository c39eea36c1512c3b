"""Exception hierarchy shared by all modules."""


class StatKahlerError(Exception):
    """Base class for every error raised by this package."""


class NonFiniteIntegrand(StatKahlerError, ValueError):
    pass


class SpaceMismatch(StatKahlerError, ValueError):
    pass


class InvalidDescriptor(StatKahlerError, ValueError):
    pass


class PartitionDiverged(StatKahlerError, ArithmeticError):
    pass


class BadIndex(StatKahlerError, IndexError):
    pass


class DegenerateMetric(StatKahlerError, ArithmeticError):
    pass


class BadStep(StatKahlerError, ValueError):
    pass


class BaseMismatch(StatKahlerError, ValueError):
    pass


class DimMismatch(StatKahlerError, ValueError):
    pass


class UnsupportedStep(StatKahlerError, NotImplementedError):
    pass


class ActionLeavesGrid(StatKahlerError, ValueError):
    pass


class NotInAnnihilator(StatKahlerError, ValueError):
    pass


class PolarizationNotFound(StatKahlerError, RuntimeError):
    pass


class NotInSubalgebra(StatKahlerError, ValueError):
    pass


class StabilizerObstruction(StatKahlerError, ValueError):
    pass


class ConfigError(StatKahlerError, ValueError):
    """Invalid run configuration; ``field`` names the offending key path."""

    def __init__(self, message, field=None, line=None):
        self.field = field
        self.line = line
        where = []
        if field is not None:
            where.append(f"field '{field}'")
        if line is not None:
            where.append(f"line {line}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class OutOfDomain(StatKahlerError, ValueError):
    """Parameter outside the family's box constraints."""
