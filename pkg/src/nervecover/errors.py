"""Error classes; each maps to a CLI exit code."""


class NerveCoverError(Exception):
    exit_code = 1


class ConfigurationError(NerveCoverError, ValueError):
    """Bad parameters, graphs or inputs."""
    exit_code = 1


class NumericalConsistencyError(NerveCoverError, ArithmeticError):
    """Two paths that must agree did not."""
    exit_code = 2


class InputOutputError(NerveCoverError, OSError):
    exit_code = 3
