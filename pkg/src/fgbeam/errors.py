"""Exception types raised by fgbeam."""


class FGBeamError(Exception):
    """Base class for all fgbeam errors."""


class InvalidModel(FGBeamError, ValueError):
    """Material or model definition is inconsistent."""


class OutOfThickness(FGBeamError, ValueError):
    """A thickness coordinate lies outside the cross-section."""


class NonPositiveDefinite(FGBeamError, ArithmeticError):
    """A section matrix that must be positive definite is not."""


class UnsupportedEigenBranch(FGBeamError, ArithmeticError):
    """The force-field characteristic constant g is not negative.

    Only the g < 0 branch (a pair of real roots +/- sqrt(-g)) of the
    internal-force ODE is implemented; g = 0 and g > 0 need different
    homogeneous solutions.
    """


class SingularSystem(FGBeamError, ArithmeticError):
    """A linear system could not be solved to the residual tolerance."""


class InvalidCase(FGBeamError, ValueError):
    """Unknown boundary case or element kind."""


class ConfigError(FGBeamError, ValueError):
    """Analysis configuration file is invalid."""


class TooCloseToBoundary(UserWarning):
    """Stress sampled within one element column of a support or load."""
