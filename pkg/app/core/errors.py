"""Error hierarchy shared by the numerical services, the CLI and the HTTP API.

``ValidationFailure`` covers inputs that can never succeed (bad scenario, bad
trajectory, violated preconditions). ``NumericalFailure`` covers computations
that gave up (under-sampled curves, non-converged quadrature, singular solves).
"""


class SignalDesignError(Exception):
    """Base class for every error raised by the package."""

    exit_code = 1
    http_status = 500


class ValidationFailure(SignalDesignError):
    exit_code = 2
    http_status = 422


class NumericalFailure(SignalDesignError):
    exit_code = 3
    http_status = 422


# --- material models -----------------------------------------------------

class PoleHit(ValidationFailure):
    """A rational function was evaluated at (or numerically on) a pole."""


class CouplingZero(ValidationFailure):
    """The coupling factor c(omega) vanished along the trajectory."""


# --- curves ----------------------------------------------------------------

class TrajectoryInvalid(ValidationFailure):
    """Endpoint or quadrant conditions on omega(s) are violated."""


class TrajectoryThroughPole(ValidationFailure):
    pass


class NotEncircling(ValidationFailure):
    """C together with its conjugate does not wind once around [-1, 1]."""


class PointOnCurve(ValidationFailure):
    pass


class NonIntegerWinding(NumericalFailure):
    pass


class AmbiguousMembership(NumericalFailure):
    """A root lies inside the guard band around the boundary of Omega."""


class InconsistentCounts(NumericalFailure):
    """Preimage and pole counts disagree with the winding number of C."""


class DegenerateTarget(ValidationFailure):
    pass


# --- measures --------------------------------------------------------------

class EvalAtMass(ValidationFailure):
    pass


class DegeneratePair(ValidationFailure):
    pass


class Infeasible(ValidationFailure):
    pass


class NoFeasibleMeasure(ValidationFailure):
    pass


# --- designs and responses ---------------------------------------------------

class InvalidDesign(ValidationFailure):
    pass


class ProbePole(ValidationFailure):
    pass


class ProbeInsideCurve(ValidationFailure):
    pass


class MissingMeasure(ValidationFailure):
    pass


class NonSimplePole(ValidationFailure):
    pass


class QuadratureNotConverged(NumericalFailure):
    pass


class ExponentOverflow(NumericalFailure):
    pass


# --- recovery ----------------------------------------------------------------

class NotMeasureIndependent(ValidationFailure):
    pass


class PreconditionM(ValidationFailure):
    """h takes values in [-1, 1] inside Omega, so late-time data is measure dependent."""


class ProbePreimageCount(ValidationFailure):
    pass


class ZeroDenominator(NumericalFailure):
    pass


class ZeroCoefficient(NumericalFailure):
    pass


class SingularSystem(NumericalFailure):
    pass


# --- scenarios / runner ------------------------------------------------------

class ScenarioError(ValidationFailure):
    pass


class UnknownFigure(ValidationFailure):
    http_status = 404


class InvalidModel(ValidationFailure):
    """A domain object (rational, trajectory, measure) failed its construction invariants."""
