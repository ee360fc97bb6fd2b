"""Exception types shared across the package."""


class LatgrowError(Exception):
    """Base class for everything raised deliberately by this package."""


class SpecParseError(LatgrowError, ValueError):
    """A lattice spec string could not be parsed."""


class BudgetExceededError(LatgrowError):
    """A configured resource budget (search nodes, map count) was exhausted.

    Raised instead of silently truncating: a partial enumeration result is
    worse than no result.
    """

    def __init__(self, message, budget=None, spent=None):
        super().__init__(message)
        self.budget = budget
        self.spent = spent


class CacheIntegrityError(LatgrowError):
    """A count cache entry conflicts with an existing value or is malformed."""


class InvalidCutTreeError(LatgrowError):
    """A cut-tree does not reconstruct to an animal that cuts back to it."""


class IdentityError(LatgrowError):
    """An exact identity that must hold was violated (indicates a bug)."""
