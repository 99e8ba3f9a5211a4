"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError means the user asked for
something invalid (exit 1), DataError means inputs or artifacts are broken
(exit 2).
"""


class HcfuseError(Exception):
    pass


class ConfigError(HcfuseError, ValueError):
    """Invalid parameter or configuration value."""


class DataError(HcfuseError, ValueError):
    """Malformed input data, matrix, or dendrogram."""


class UltrametricityError(DataError):
    """Matrix fails the ultrametric inequality where one is required."""
