"""Exception types.  All derive from :class:`PosetError` (a ``ValueError``)."""


class PosetError(ValueError):
    pass


class DuplicateLabel(PosetError):
    pass


class UnknownLabel(PosetError):
    pass


class CycleDetected(PosetError):
    pass


class EmptyPoset(PosetError):
    pass


class EmptySelection(PosetError):
    pass


class NotCompleteSubset(PosetError):
    pass


class QuotientNotAntisymmetric(PosetError):
    pass


class ZeroDimensional(PosetError):
    pass


class NotSimpleNode(PosetError):
    pass


class NotMinimal(PosetError):
    pass


class FewerThanTwoCovers(PosetError):
    pass


class NoUniqueMaximal(PosetError):
    pass


class NoUniqueMinimal(PosetError):
    pass


class DimensionTooSmall(PosetError):
    pass


class PreconditionFailed(PosetError):
    pass


class SizeLimitExceeded(PosetError):
    pass


class NonCoveringGenerator(PosetError):
    pass


class NonTotalMap(PosetError):
    pass


class ParseError(PosetError):
    """Malformed poset or map file; ``line`` is 1-based when known."""

    def __init__(self, message, line=None, path=None):
        self.line = line
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)


class RedundantGeneratorWarning(UserWarning):
    """An order generator that is implied by the others (not a cover)."""
