"""Exception types shared across the solver suite.

Three families map onto the CLI exit codes: parameter/domain problems
(exit 2), iteration or quadrature failures (exit 3), and invalid patch
geometry (exit 4).
"""

from __future__ import annotations


class VStateError(Exception):
    """Base class for all library errors."""


class DomainError(VStateError):
    """A parameter lies outside the admissible range."""


class PoleError(DomainError):
    """Evaluation requested at a pole of gamma or of a hypergeometric parameter."""


class DivergenceError(DomainError):
    """Hypergeometric series requested at z=1 where it diverges."""


class NegativeDiscriminantError(DomainError):
    """The dispersion relation has no real roots for these parameters."""


class NotAnEigenvalueError(DomainError):
    """Kernel generator requested at an angular velocity that is not a root."""


class ConvergenceError(VStateError):
    """An iterative procedure failed to reach its tolerance."""


class QuadratureError(ConvergenceError):
    """Oscillatory-tail averaging of a semi-infinite integral did not settle."""


class SingularJacobianError(ConvergenceError):
    """Newton hit a numerically singular Jacobian."""


class PredictionError(ConvergenceError):
    """Arclength predictor failed after repeated step halvings."""


class GeometryError(VStateError):
    """A boundary state is geometrically invalid (coincident or crossing nodes)."""
