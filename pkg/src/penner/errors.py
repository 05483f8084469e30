"""Exception hierarchy shared by all numerical modules."""


class PennerError(Exception):
    """Base class for all library-specific failures."""


class ZeroOfG(PennerError):
    """Barnes G vanishes at the requested argument (ln G = -inf)."""


class PoleOfLog(PennerError):
    """ln|G(1-x)| diverges because x sits on a positive integer."""


class AsymptoticRegime(PennerError):
    """Argument too small for the asymptotic (Stirling-type) expansion."""


class GBarnesZero(PennerError):
    """Partition function hits a zero of the Barnes G in the denominator."""


class SinZero(PennerError):
    """sin(pi/g) vanishes: the l = 0 singular subsequence."""


class CriticalT(PennerError):
    """The 't Hooft parameter sits on the critical point t = 1."""


class SingularPhase(PennerError):
    """l = 0 phase: the planar free energy is -infinity."""


class Degenerate(PennerError):
    """Laguerre parameter is a negative integer in [-n, -1]."""


class NoConvergence(PennerError):
    """Iterative solver failed to converge; carries diagnostics."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class CoincidentPoints(PennerError):
    """Two saddle points coincide within tolerance."""


class QuadratureFailure(PennerError):
    """Quadrature did not reach the requested accuracy."""

    def __init__(self, message, error_estimate=None):
        super().__init__(message)
        self.error_estimate = error_estimate


class TraceFailure(PennerError):
    """Level-curve tracing failed (diagnostics in message)."""


class LevelNotClosed(PennerError):
    """Traced level curve failed to close on itself."""


class OriginSingular(PennerError):
    """Density evaluated at z = 0 where the formula is singular."""


class DomainError(PennerError, ValueError):
    """Arguments outside the mathematical domain of an operation."""
