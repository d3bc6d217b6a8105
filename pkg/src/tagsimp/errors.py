"""Exception types shared across the package."""


class TagsimpError(Exception):
    """Base class for all package errors."""


class MalformedTag(TagsimpError):
    """A serialized edit tag could not be parsed."""


class LengthMismatch(TagsimpError):
    """A tag sequence does not match the length of the token sequence."""


class ShapeMismatch(TagsimpError):
    """Prediction arrays disagree in length or vocabulary dimension."""


class ProtocolError(TagsimpError):
    """An external tagger peer sent a malformed or out-of-contract message."""


class PeerUnavailable(TagsimpError):
    """The external tagger peer cannot be reached or has gone away."""


class InvariantViolation(TagsimpError):
    """A prediction violates the probability invariants (e.g. a row not summing to 1)."""


class EmptyCorpus(TagsimpError):
    """An operation that needs at least one record received none."""


class NoWords(TagsimpError):
    """A readability computation received sentences containing no words."""


class EmptyDevSet(TagsimpError):
    """Tuning requires a non-empty development set."""
