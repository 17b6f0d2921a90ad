"""Exception hierarchy for lanesim."""


class LanesimError(ValueError):
    """Base class for all library errors."""


class NonIntegerCellCount(LanesimError):
    pass


class InvalidCellWidth(LanesimError):
    pass


class DegenerateVelocity(LanesimError):
    pass


class RangeNotMultipleOfDx(LanesimError):
    pass


class RangeTooSmall(LanesimError):
    pass


class KernelWiderThanDomain(LanesimError):
    pass


class LengthMismatch(LanesimError):
    pass


class LaneIndexOutOfRange(LanesimError):
    pass


class ProfileOutOfRange(LanesimError):
    pass


class CflViolation(LanesimError):
    pass


class RangeViolation(LanesimError):
    """A density left [0, 1]. Signals a CFL or implementation bug."""


class SnapshotTimeOutOfRange(LanesimError):
    pass


class StateMismatch(LanesimError):
    pass


class GridMismatch(LanesimError):
    pass


class ConfigError(LanesimError):
    pass


class SchemaError(ConfigError):
    def __init__(self, key_path, message):
        self.key_path = key_path
        super().__init__(f"{key_path}: {message}")


class SemanticError(ConfigError):
    pass
