"""Exception types shared across the package."""

from __future__ import annotations


class NetswapError(Exception):
    """Base class for all package errors."""


class MalformedJson(NetswapError):
    """Instance text is not valid JSON or lacks the required structure."""


class NonPermutationPreference(NetswapError):
    """A preference ranking is not a permutation of all house ids."""


class NeighborOutOfRange(NetswapError):
    """A neighbor id falls outside 1..n."""


class SelfNeighbor(NetswapError):
    """An agent lists herself as a neighbor."""


class EmptyInitialSet(NetswapError):
    """The initial agent set is empty."""


class InitialOutOfRange(NetswapError):
    """An initial agent id falls outside 1..n."""


class ReportExceedsTruth(NetswapError):
    """A reported neighbor set is not a subset of the true neighbor set."""


class EmptyCandidateSet(NetswapError):
    """favorite_in was called with no candidates."""


class NoLowerCandidate(NetswapError):
    """next_favorite was called with nothing ranked below the current pointer."""


class CapExceeded(NetswapError):
    """An enumeration would exceed its configured cap."""


class UnknownFixture(NetswapError):
    """No fixture is registered under the requested name."""
