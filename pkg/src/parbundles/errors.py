"""Exception types shared across the package."""


class UsageError(ValueError):
    """An operation was called with arguments violating its contract."""


class DomainError(UsageError):
    """Input is structurally valid but outside the supported domain
    (weight lattice violations, unsupported points, non-integral degrees)."""


class SchemaError(UsageError):
    """A JSON document does not conform to its published schema.

    ``path`` names the offending location, e.g. ``flags[0].steps[1].weight``.
    """

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
