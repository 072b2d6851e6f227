"""Exception types shared across the package."""


class ClusterPeierlsError(Exception):
    """Base class for all package errors."""


class SizeError(ClusterPeierlsError, ValueError):
    """A size or dimension is zero, mismatched or above the supported cap."""


class InvalidEdgeError(ClusterPeierlsError, ValueError):
    """Self-loop, duplicate or out-of-range edge."""


class NonUnitaryGateError(ClusterPeierlsError, ValueError):
    pass


class ImpossibleOutcomeError(ClusterPeierlsError, ValueError):
    """A forced measurement outcome has (numerically) zero probability."""


class DomainError(ClusterPeierlsError, ValueError):
    """Argument outside the domain where a formula or operation is defined."""


class ParameterError(ClusterPeierlsError, ValueError):
    pass


class PartitionError(ClusterPeierlsError, ValueError):
    pass


class PatternError(ClusterPeierlsError, ValueError):
    """Malformed measurement pattern (ordering, duplicate qubits, bad kind)."""


class ConfigError(ClusterPeierlsError, ValueError):
    """Experiment configuration failed validation; message carries the key path."""


class ColumnError(ClusterPeierlsError, ValueError):
    """CSV input does not match the expected column schema."""
