"""Exception hierarchy shared by every module."""


class NcpLinkError(Exception):
    """Base class; the CLI maps these to exit code 2."""


class NotAPoset(NcpLinkError):
    pass


class NotBounded(NcpLinkError):
    pass


class NotALattice(NcpLinkError):
    pass


class NotGraded(NcpLinkError):
    pass


class NotComparable(NcpLinkError):
    pass


class NotInV(NcpLinkError):
    """A vector whose coordinates do not sum to zero."""


class DimensionMismatch(NcpLinkError):
    pass


class FieldMismatch(NcpLinkError):
    pass


class InvalidPartition(NcpLinkError):
    pass


class Crossing(NcpLinkError):
    pass


class Cyclic(NcpLinkError):
    pass


class TooLarge(NcpLinkError):
    pass


class NotAGraph(NcpLinkError):
    pass


class DegenerateSubset(NcpLinkError):
    pass


class PreconditionFailed(NcpLinkError):
    pass


class NoApartment(NcpLinkError):
    """Raised when an apartment search exhausts; would contradict a proved lemma."""


class NoPair(NcpLinkError):
    pass


class EmbeddingInvalid(NcpLinkError):
    pass


class UnknownLemma(NcpLinkError):
    pass
