"""Exception hierarchy shared by all elliptica modules."""


class EllipticaError(Exception):
    """Base class for every error raised by the package."""


class DegenerateLattice(EllipticaError, ValueError):
    """The two periods are (numerically) parallel or zero."""


class PoleProximity(EllipticaError, ValueError):
    """Evaluation point lies within the pole radius of a lattice point."""


class EvaluationFailure(EllipticaError, ArithmeticError):
    """A numerical evaluation did not reach its accuracy target."""


class ConvergenceFailure(EvaluationFailure):
    pass


class DegenerateAddition(EllipticaError, ArithmeticError):
    """The addition formula quotient is 0/0; evaluate directly instead."""


class DegenerateShift(EllipticaError, ArithmeticError):
    """The half-period shift is evaluated at the half-period itself."""


class Indeterminate(EllipticaError, ArithmeticError):
    """Numerator and denominator of a rational function both vanish."""


class ConstraintViolation(EllipticaError, ValueError):
    """Parameters violate a family constraint."""


class IncompatibleLattice(EllipticaError, ValueError):
    pass


class MissingParameter(EllipticaError, KeyError):
    pass


class NonRealCoefficients(ConstraintViolation):
    pass


class AsymmetricQ(ConstraintViolation):
    pass


class OddQForP4mg(ConstraintViolation):
    pass


class SamplingExhausted(EllipticaError, RuntimeError):
    pass


class ConfigError(EllipticaError, ValueError):
    """Malformed configuration file or command-line value."""
