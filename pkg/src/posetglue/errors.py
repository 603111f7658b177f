"""Exception hierarchy.

Three broad families, mirrored by the CLI exit codes: input/precondition
problems (exit 2), verification failures on well-formed input (exit 1), and
internal invariant violations that indicate a bug (exit 3).
"""


class PosetError(Exception):
    """Base class for all library errors."""


class InputError(PosetError):
    """Bad input or violated operation precondition."""


class CycleDetected(InputError):
    pass


class DanglingNode(InputError):
    pass


class UnknownNode(InputError):
    pass


class EmptyPoset(InputError):
    pass


class EmptySet(InputError):
    pass


class NotComplete(InputError):
    """A set to be glued is not interval-closed."""


class NotPosetMap(InputError):
    pass


class NotEmbedding(InputError):
    pass


class NotCompatible(InputError):
    """Map disagrees on a fiber of a gluing map; carries a witness pair."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class OverlappingCollection(InputError):
    pass


class NotAntichainCollection(InputError):
    pass


class NotACover(InputError):
    pass


class NotMinimal(InputError):
    pass


class NotHeightZero(InputError):
    pass


class NotASubcollection(InputError):
    pass


class NotHeightOne(InputError):
    pass


class NotUniqueCover(InputError):
    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class ZeroDimensional(InputError):
    pass


class ParseError(InputError):
    pass


class VerificationFailure(PosetError):
    """A well-formed certificate or claim failed its check."""


class StepMismatch(VerificationFailure):
    pass


class BrokenEmbedding(VerificationFailure):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InternalInvariantError(PosetError):
    """A guaranteed runtime assertion failed; this is a bug, not bad input."""
