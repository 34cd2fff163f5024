"""Exception hierarchy shared by all affinedim modules."""

from __future__ import annotations


class AffineDimError(Exception):
    """Base class for all errors raised by this package."""


class InputError(AffineDimError, ValueError):
    """Invalid caller input: bad shapes, non-finite values, out-of-range options."""


class DegenerateInputError(InputError):
    """A configuration that collapses entirely onto its chosen origin."""


class LoadError(InputError):
    """A bundled or user data file is missing, unreadable, or fails its checksum."""


class InternalError(AffineDimError, RuntimeError):
    """An internal routine (e.g. a feasibility solver) failed unexpectedly."""


class SearchError(AffineDimError, RuntimeError):
    """Numerical search hit a non-finite objective.

    Carries the last iterate with a finite objective value, if any, so
    callers can inspect where the search blew up.
    """

    def __init__(self, message, last_iterate=None, last_value=None):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.last_value = last_value
