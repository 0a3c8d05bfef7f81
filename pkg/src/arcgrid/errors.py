"""Exception types shared across the package."""


class ArcgridError(Exception):
    """Base class for all arcgrid errors."""


class CodeSyntaxError(ArcgridError):
    """A DT code line could not be parsed."""


class DuplicateLabel(CodeSyntaxError):
    """An even label occurs twice in a DT code."""


class OddEntry(CodeSyntaxError):
    """A DT code entry is odd."""


class OutOfRange(CodeSyntaxError):
    """A DT code entry is outside {±2, ..., ±2n} or zero."""


class NonRealizable(ArcgridError):
    """The DT sequence admits no planar embedding."""


class NotAKnot(ArcgridError):
    """The diagram or grid has more than one component."""


class BadHeights(ArcgridError):
    """Interval endpoints do not cover each height exactly twice."""


class IllegalSite(ArcgridError):
    """A rewriting move was requested at a site where it is not legal."""


class InconsistentHeights(ArcgridError):
    """Height assignment violated the over/under order at a crossing."""


class PlacementConflict(ArcgridError):
    """No admissible endpoint for a spoke; the caller retries a variant."""


class ConstructionFailed(ArcgridError):
    """All height/spoke variants produced a grid of the wrong knot type."""


class NoTreeFound(ArcgridError):
    """No filtered spanning tree exists (precondition violation)."""


class TargetNotReached(ArcgridError):
    """Grid search did not reach the requested size.

    Carries the best verified grid found so that callers can still
    report an interval.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class TooLarge(ArcgridError):
    """Diagram exceeds the configured crossing limit for an invariant."""


class BudgetExceeded(ArcgridError):
    """A search or recursion exceeded its node budget."""


class UnsupportedFormat(ArcgridError):
    """Unknown rendering format."""
