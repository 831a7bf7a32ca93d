"""Exception hierarchy shared by all modules.

Every error raised on bad input derives from :class:`NNRankError` so the CLI can
map it to an exit code in one place.
"""


class NNRankError(Exception):
    """Base class for all library errors."""


class FormatError(NNRankError, ValueError):
    """Text input violates one of the file grammars."""


class MalformedScalar(FormatError):
    pass


class MalformedGraph(FormatError):
    pass


class LoopEdge(MalformedGraph):
    pass


class WrongDomain(NNRankError, TypeError):
    """A sqrt(2) component showed up where only rationals are allowed."""


class DimMismatch(NNRankError, ValueError):
    pass


class BadPermutation(NNRankError, ValueError):
    pass


class NegativeInput(NNRankError, ValueError):
    pass


class AlphaOutOfRange(NNRankError, ValueError):
    pass


class XiOutOfRange(NNRankError, ValueError):
    pass


class PreconditionNotCertified(NNRankError):
    pass


class VarSpansMultipleRows(NNRankError):
    pass


class UnknownVar(NNRankError, KeyError):
    pass


class UnresolvedVariables(NNRankError):
    pass


class InvalidCover(NNRankError, ValueError):
    pass


class NotACover(InvalidCover):
    pass


class NotAClique(InvalidCover):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class TooLarge(NNRankError):
    pass


class VerificationFailure(NNRankError):
    """A machine check that is supposed to hold did not."""


class ValidationFailure(VerificationFailure):
    pass


class CertificateFailure(VerificationFailure):
    pass


class ReconstructionMismatch(VerificationFailure):
    def __init__(self, msg, coord=None):
        super().__init__(msg)
        self.coord = coord
