"""Exception and warning types shared across the package."""


class WeylScatterError(Exception):
    """Base class for all numerical/domain errors raised by this package."""


class NotHermitian(WeylScatterError):
    """Input matrix is not Hermitian within the requested tolerance."""


class NotPSD(WeylScatterError):
    """Hermitian input has an eigenvalue below the negative clamp tolerance."""


class SingularArgument(WeylScatterError):
    """Matrix logarithm (or a derived quantity) requested at a near-singular argument."""


class LowerHalfSpectrum(WeylScatterError):
    """Matrix logarithm requested for an argument whose imaginary part is not PSD."""


class EvaluationDomain(WeylScatterError):
    """Weyl function evaluated outside its domain of definition."""


class SingularPoint(WeylScatterError):
    """Boundary value requested at a declared singular point (pole, band edge)."""


class BandEdge(SingularPoint):
    """Boundary value requested exactly at a spectral band edge."""


class BoundaryLimitFailed(WeylScatterError):
    """Extrapolation of the boundary value did not converge to tolerance."""


class SpectralPoint(WeylScatterError):
    """0 is (numerically) in the spectrum of Theta - M(lambda).

    Carries the condition number of the failed inversion when available.
    """

    def __init__(self, message, cond=None):
        super().__init__(message)
        self.cond = cond


class SingularJost(WeylScatterError):
    """Jost matrix E(0, lambda) is numerically singular (pole of M)."""


class StepFailure(WeylScatterError):
    """Adaptive ODE integrator failed to reach the origin."""


class ImZero(WeylScatterError):
    """Scalar-type scattering matrix requested where Im m = 0 (trivial fiber)."""


class NonInvertible(WeylScatterError):
    """S(infinity) - I is not invertible; boundary parameter cannot be recovered."""


class NotOperator(WeylScatterError):
    """Boundary parameter is a genuine relation; a bounded operator is required."""


class ThresholdPoint(WeylScatterError):
    """Closed-form spectral shift requested at an excluded threshold point."""


class ConfigError(WeylScatterError):
    """Run configuration is invalid."""


class QuadratureError(WeylScatterError):
    """Adaptive quadrature failed to meet the requested tolerance."""


class TruncationWarning(UserWarning):
    """Estimated potential tail beyond the truncation radius exceeds the ODE tolerance."""
