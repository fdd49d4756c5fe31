"""Exception hierarchy shared by every module."""


class WinnowOptError(Exception):
    """Base class for all errors raised by winnowopt."""


class SortError(WinnowOptError, TypeError):
    """An atom or value does not respect the D/Q sort discipline."""


class SchemaMismatchError(WinnowOptError, ValueError):
    pass


class PreconditionError(WinnowOptError, ValueError):
    """A check was asked about a preference that violates its precondition
    (for example a weak-order test on a reflexive preference)."""


class PlanError(WinnowOptError, ValueError):
    pass


class DataError(WinnowOptError, ValueError):
    """Bad CSV data, or an instance that violates its declared dependencies."""
