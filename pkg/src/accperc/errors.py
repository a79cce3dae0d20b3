"""Errors shared across modules (the CLI maps them to exit codes)."""


class ResourceCapError(RuntimeError):
    """A size cap (memory / polynomial degree / dimension) would be exceeded."""


class BudgetExceededError(RuntimeError):
    """An enumeration ran past its configured leaf/node budget."""
