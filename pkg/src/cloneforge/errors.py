"""Exception types shared across the toolkit."""


class CloneforgeError(Exception):
    """Base class for all toolkit errors."""


class ParseError(CloneforgeError):
    """Source text contains syntax errors.

    Carries the spans of every error node so callers can report or skip
    the offending regions.  The partial tree (if one was built) is kept
    on ``self.tree``.
    """

    def __init__(self, spans, tree=None, message=None):
        self.spans = list(spans)
        self.tree = tree
        super().__init__(message or f"{len(self.spans)} syntax error(s) at {self.spans[:4]}")


class UnsupportedConstruct(CloneforgeError):
    """Scope analyzer met a construct it cannot resolve (recorded, not fatal)."""


class OverlappingEdits(CloneforgeError):
    """Two edits passed to render() overlap."""


class PostEditParseFailure(CloneforgeError):
    """Edited source no longer parses."""


class TransformFailed(CloneforgeError):
    """A clone transform could not be applied at the chosen site."""


class NoApplicableTransform(CloneforgeError):
    """No clone transform has a candidate site in this function."""


class InjectionFailed(CloneforgeError):
    """A bug injection produced text that no longer parses."""


class NoApplicableBug(CloneforgeError):
    """No bug kind has a usable site in this function."""


class CorpusTooSmall(CloneforgeError):
    """Subword training corpus is empty."""


class DegenerateDistribution(UserWarning):
    """A predicted distribution assigns zero probability to the true token."""


# The next three double as stdlib categories so callers may catch either
# the toolkit base or the conventional built-in.

class ZeroNormEmbedding(CloneforgeError, ValueError):
    """Cosine similarity requested on a zero-norm vector."""


class GroupTooSmall(CloneforgeError, ValueError):
    """A retrieval group has fewer than R+1 members."""


class Diverged(CloneforgeError, RuntimeError):
    """Toy training loss became non-finite."""
