"""Exception hierarchy shared by all modules."""


class CurvOscError(Exception):
    """Base class for library errors."""


class DomainError(CurvOscError, ValueError):
    """A radius lies outside the open radial domain of the model."""


class PreconditionError(CurvOscError, ValueError):
    """Inputs do not belong to the regime an operation was asked for."""


class InconsistentParametersError(CurvOscError, ValueError):
    """Cartesian amplitudes violate the constraint relations."""


class OutOfRangeError(CurvOscError, ValueError):
    """An initial radius is not reachable on the requested trajectory."""


class ContractError(CurvOscError, ValueError):
    """Two objects that should describe the same motion do not."""


class IntegrationError(CurvOscError, RuntimeError):
    """The numerical integrator could not finish the requested span."""


class PeriodDetectionError(CurvOscError, RuntimeError):
    """No periodic radial signal could be found in a sampled trajectory."""


class TruncationError(CurvOscError, ValueError):
    """A quantum state lies above the bound-state cutoff."""


class QuadratureError(CurvOscError, RuntimeError):
    """Adaptive quadrature missed its accuracy target."""

    def __init__(self, message, estimate=None, abserr=None):
        super().__init__(message)
        self.estimate = estimate
        self.abserr = abserr
