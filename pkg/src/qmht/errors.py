"""Shared exception types."""


class DimensionLimitError(RuntimeError):
    """A requested tensor power exceeds the configured dense dimension cap."""


class NumericalConsistencyError(RuntimeError):
    """An internal numerical invariant failed (rank decision, detector algebra)."""


class ScenarioError(ValueError):
    """A scenario file could not be parsed or validated."""
