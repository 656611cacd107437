"""Exception hierarchy shared by all modules."""


class NewtonSingError(Exception):
    """Base class; ``module`` names the component that raised."""

    module = "newtonsing"


class PreconditionViolated(NewtonSingError, ValueError):
    module = "normalform"


# poly
class SingularMatrix(NewtonSingError, ValueError):
    module = "poly"


class ZeroPolynomial(NewtonSingError, ValueError):
    module = "poly"


class DegenerateSecondDerivative(NewtonSingError, ValueError):
    module = "poly"


class TruncationInsufficient(NewtonSingError, ValueError):
    module = "poly"


# newton
class EmptyPolynomial(NewtonSingError, ValueError):
    module = "newton"


class PrincipalFaceNotEdge(NewtonSingError, ValueError):
    module = "newton"


class NotSupportingLine(NewtonSingError, ValueError):
    module = "newton"


# homog
class NotHomogeneous(NewtonSingError, ValueError):
    module = "homog"


# normalform
class JetOrderInsufficient(NewtonSingError):
    module = "normalform"


class TypeHasNoRootJet(NewtonSingError, ValueError):
    module = "normalform"


class UndefinedAtAxis(NewtonSingError, ValueError):
    module = "normalform"


class NotA2Germ(NewtonSingError, ValueError):
    module = "normalform"


class ShiftNotFound(NewtonSingError):
    module = "normalform"


# oscint
class BudgetExceeded(NewtonSingError):
    """Quadrature panel cap hit; ``partial`` holds the under-resolved value."""

    module = "oscint"

    def __init__(self, message, partial=None, panels=None):
        super().__init__(message)
        self.partial = partial
        self.panels = panels


class DegenerateFit(NewtonSingError):
    """All sampled |J| are numerically zero: super-polynomial decay."""

    module = "oscint"

    def __init__(self, message, values=None):
        super().__init__(message)
        self.values = values


# cli
class ParseError(NewtonSingError, ValueError):
    module = "cli"

    def __init__(self, message, offset):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class NonRationalCoefficient(ParseError):
    pass
