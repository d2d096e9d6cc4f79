"""Shared exception types."""

from __future__ import annotations


class StructureError(ValueError):
    """A value violates a structural invariant (wrong stem color, bad twin, ...)."""


class PartialMapError(ValueError):
    """Operation requires a complete map but frontier half-edges are present."""


class ResourceLimitError(RuntimeError):
    """A guard or budget was exceeded.

    Carries the seed (or other reproduction info) so the offending run can
    be replayed.  Budgets exist to make pathological randomness loud instead
    of silently truncating structures.
    """

    def __init__(self, message: str, seed=None):
        if seed is not None:
            message = f"{message} (seed={seed!r})"
        super().__init__(message)
        self.seed = seed


class NeedsDeepening(Exception):
    """Internal signal: a lazily realized structure must be grown further.

    Never escapes the public API; iterative-deepening drivers catch it.
    """
