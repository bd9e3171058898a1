"""Exception hierarchy.

Every error carries a short machine-readable ``code`` and the process exit
status the CLI maps it to.
"""


class VacuumRcError(Exception):
    code = "ERROR"
    exit_status = 1


class ConfigError(VacuumRcError, ValueError):
    code = "CONFIG"
    exit_status = 2


class DimensionError(VacuumRcError, TypeError):
    """Raised when a quantity has the wrong mass dimension."""

    code = "DIMENSION"
    exit_status = 3

    def __init__(self, message, expected=None, actual=None):
        if expected is not None or actual is not None:
            message = f"{message} (expected dim {expected}, got {actual})"
        super().__init__(message)
        self.expected = expected
        self.actual = actual


class DomainError(VacuumRcError, ValueError):
    code = "DOMAIN"
    exit_status = 3


class NoDecayError(DomainError):
    """The vacuum does not decay, so the characteristic volume is undefined."""

    code = "NO_DECAY"


class IntegrationError(VacuumRcError, RuntimeError):
    code = "INTEGRATION_FAIL"
    exit_status = 4

    def __init__(self, message, last_state=None):
        super().__init__(message)
        self.last_state = last_state


class ResourceLimitError(VacuumRcError, ValueError):
    code = "CONFIG_LIMIT"
    exit_status = 5


class ConsistencyError(VacuumRcError, RuntimeError):
    code = "INCONSISTENT"
    exit_status = 1
