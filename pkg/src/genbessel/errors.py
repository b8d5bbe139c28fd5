"""Exception hierarchy shared by all modules."""


class GenBesselError(Exception):
    """Base class for every error raised by the package."""


class PoleError(GenBesselError, ZeroDivisionError):
    """Argument sits on a pole of a meromorphic function."""


class NumericalOverflow(GenBesselError, OverflowError):
    """A result is not representable in double precision."""


class ParameterPole(GenBesselError):
    """A lower hypergeometric parameter is a nonpositive integer."""


class BranchCut(GenBesselError, ValueError):
    """Argument lies on a branch cut of the requested function."""


class NonConvergence(GenBesselError, ArithmeticError):
    """Series or quadrature did not reach its tolerance.

    The best available value and error estimate are attached.
    """

    def __init__(self, message, value=None, estimate=None):
        super().__init__(message)
        self.value = value
        self.estimate = estimate


class QuadratureFailure(NonConvergence):
    """A quadrature rule could not meet its target tolerance."""


class DomainError(GenBesselError, ValueError):
    """Argument lies outside the region where a representation is valid."""


class DefinitionError(DomainError):
    """Parameters for which a function is not defined at all."""


class LimitFailure(GenBesselError, ArithmeticError):
    """A removable-singularity limit could not be refined to tolerance."""


class DomainGate(DomainError):
    """Theorem parameters violate the hypotheses of the identity."""


class PoleGate(DomainGate):
    """Theorem parameters hit a pole of an explicit prefactor."""


class TailNotMet(GenBesselError, ArithmeticError):
    """A certified tail bound could not be reached within the term cap."""

    def __init__(self, message, terms=None, tail=None):
        super().__init__(message)
        self.terms = terms
        self.tail = tail
