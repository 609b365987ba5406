"""Exception hierarchy.

Every failure mode raised by the library derives from :class:`ChebnetError`
so that callers (and the command line front end) can catch one base class.
"""


class ChebnetError(Exception):
    """Base class for all library errors."""


# -- evaluation ---------------------------------------------------------------

class DomainViolation(ChebnetError, ValueError):
    pass


class NonFinite(ChebnetError, ArithmeticError):
    pass


class DegenerateTangent(ChebnetError):
    """The tangent vectors r_p, r_q are (numerically) parallel."""


class StencilOutOfDomain(ChebnetError, ValueError):
    pass


# -- special functions --------------------------------------------------------

class ParamOutOfRange(ChebnetError, ValueError):
    pass


class BranchViolation(ChebnetError, ValueError):
    pass


# -- nets ---------------------------------------------------------------------

class DegeneratePair(ChebnetError):
    """The two direction fields are not transversal."""


class SingularNet(ChebnetError):
    """sin(omega) fell below the singularity threshold."""


# -- catalog ------------------------------------------------------------------

class BadParams(ChebnetError, ValueError):
    pass


class DomainEmpty(ChebnetError, ValueError):
    pass


class OutsideGaussImage(ChebnetError, ValueError):
    pass


class NewtonDiverged(ChebnetError):
    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class DerivativeSingular(ChebnetError, ArithmeticError):
    pass


# -- construction -------------------------------------------------------------

class ConstructionError(ChebnetError):
    pass


class NoOverlap(ConstructionError):
    pass


class DegenerateEigen(ConstructionError):
    pass


class GenericityViolation(ConstructionError):
    pass


class CuspidalPoint(ConstructionError):
    pass


class DegenerateSigns(ConstructionError, ValueError):
    pass


class LeftDomain(ConstructionError):
    pass


class CommutationDefect(ConstructionError):
    pass


class ClosednessViolation(ConstructionError):
    pass


class MaskedRegion(ConstructionError):
    pass


class CompatibilityViolation(ConstructionError):
    pass


# -- export -------------------------------------------------------------------

class EmptyObject(ChebnetError, ValueError):
    pass


class ExportIoError(ChebnetError, OSError):
    pass
