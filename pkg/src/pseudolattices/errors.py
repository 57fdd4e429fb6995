"""Exception hierarchy shared by the library and the command line."""


class PseudolatticeError(Exception):
    """Base class for all errors raised by this package."""


class NotSurfaceLike(PseudolatticeError):
    """The lattice (or the proposed point) fails the surface-like axioms.

    ``inconclusive`` is set when the verdict comes from a bounded search for
    isotropic vectors rather than from a proof.
    """

    def __init__(self, message: str, inconclusive: bool = False):
        super().__init__(message)
        self.inconclusive = inconclusive


class NotExceptional(PseudolatticeError):
    pass


class HypothesisError(PseudolatticeError):
    """A theorem's hypotheses are not met by the input."""


class DefectUndefined(HypothesisError):
    pass


class DefectNonzero(HypothesisError):
    """Rank reduction stopped at the 0/1 pattern because the defect is nonzero.

    The partial result (basis, word, report) is attached as ``partial``.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial


class ConsistencyError(PseudolatticeError):
    """An identity that the theory guarantees failed to hold.

    This signals either a bug or an input violating a precondition that could
    not be checked up front; it is never silently repaired.
    """


class AmbiguousPoint(PseudolatticeError):
    """Several point-like elements exist and the caller has to pick one."""

    def __init__(self, message: str, candidates=()):
        super().__init__(message)
        self.candidates = tuple(candidates)
