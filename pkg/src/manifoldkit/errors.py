"""Exception hierarchy.

Every error raised on purpose by the library derives from :class:`ManifoldError`.
The three broad classes the CLI maps to exit codes are

* :class:`ParseError` -- malformed input files (exit code 2),
* :class:`DomainError` -- inputs outside the domain of an operation (exit code 3),
* :class:`NoConvergence` -- an iterative solver ran out of iterations (exit code 4).

Validation failures that are not domain errors (shape mismatch, non-finite
entries, bad metric tag) also map to exit code 3 in the CLI.
"""


class ManifoldError(Exception):
    """Base class for all library errors."""


class ParseError(ManifoldError):
    """A matrix file, manifest or config could not be parsed."""


class DimensionMismatch(ManifoldError, ValueError):
    pass


class NonFiniteEntries(ManifoldError, ValueError):
    pass


class UnsupportedMetric(ManifoldError, ValueError):
    pass


class BaseMismatch(ManifoldError, ValueError):
    """Two tangent vectors do not live at the same base point."""


class DecompositionFailed(ManifoldError):
    pass


class WeightSchemeUnsupported(ManifoldError, ValueError):
    pass


class DomainError(ManifoldError):
    """Input lies outside the domain where the operation is defined."""


# Kept as an alias: the manifold API documents log failures under this name.
OutOfInjectivityDomain = DomainError


class NotSymmetric(DomainError):
    pass


class NotPositiveDefinite(DomainError):
    def __init__(self, message, min_eigenvalue=None):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class NotOrthonormal(DomainError):
    pass


class NotTangent(DomainError):
    pass


class NotHorizontal(NotTangent):
    pass


class SingularInput(DomainError):
    pass


class SingularBase(SingularInput):
    pass


class LeftManifold(SingularInput):
    """A straight line in GL(n) ran into a (near-)singular matrix."""


class SpectrumOnBranchCut(DomainError):
    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class AntipodalSpectrum(SpectrumOnBranchCut):
    """An orthogonal matrix has (numerically) an eigenvalue -1."""


class ComponentMismatch(DomainError):
    pass


class RankDeficientOverlap(DomainError):
    pass


class NotNormal(DomainError):
    pass


class OutOfRange(DomainError):
    pass


class LogDomainFailure(DomainError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class DegenerateSpectrum(DomainError):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class SingularValueZero(DomainError):
    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class NoConvergence(ManifoldError):
    def __init__(self, message, max_iter=None, history=None, last=None):
        super().__init__(message)
        self.max_iter = max_iter
        self.history = list(history) if history is not None else []
        self.last = last
