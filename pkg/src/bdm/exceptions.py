"""Exception types raised by the boundary-calculus engine."""


class BDMError(Exception):
    """Base class for all engine errors."""


class PoleCollision(BDMError):
    """Two same-side poles are numerically close but not identical."""


class PoleEvaluation(BDMError):
    """A symbol was evaluated (numerically) at one of its poles."""


class NonIntegrable(BDMError):
    """A line integral was requested for a symbol without O(xi^-2) decay."""


class DomainError(BDMError, ValueError):
    """An argument lies outside the domain of a closed form."""


class TailTooLarge(BDMError):
    """A Laguerre expansion has not decayed at the truncation index."""


class ClassViolation(BDMError):
    """A composition would leave the class-0 singular Green symbols."""


class SectorViolation(BDMError):
    """The spectral parameter lies outside the admissible sector."""


class QuadratureFailure(BDMError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NoConvergence(QuadratureFailure):
    """The oracle quadrature did not converge."""


class RankDeficient(BDMError):
    """A constant-recovery linear system is numerically singular."""


class IllConditioned(BDMError):
    """The design matrix of an expansion fit is too ill-conditioned."""


class InsufficientSamples(BDMError):
    """Too few samples were supplied for the requested fit."""


class SpecError(BDMError):
    """A problem-specification file failed validation."""
