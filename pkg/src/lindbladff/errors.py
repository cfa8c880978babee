"""Exception types shared across the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition (bad shape, bad spectrum,
    malformed file, infeasible plan).  The CLI maps this to exit code 1."""


class CapacityError(ValidationError):
    """A request exceeds a configured size cap."""
