"""Exception types raised across the package."""


class PickSpaceError(Exception):
    """Base class for every error raised by pickspace."""


class NotFinite(PickSpaceError):
    pass


class NotHermitian(PickSpaceError):
    pass


class NotPSD(PickSpaceError):
    def __init__(self, message, min_eig=None):
        super().__init__(message)
        self.min_eig = min_eig


class NotContraction(PickSpaceError):
    def __init__(self, message, norm=None):
        super().__init__(message)
        self.norm = norm


class SingularKernel(PickSpaceError):
    pass


class ZeroKernelEntry(PickSpaceError):
    pass


class DomainViolation(PickSpaceError):
    pass


class SpaceMismatch(PickSpaceError):
    pass


class DimMismatch(PickSpaceError):
    pass


class NotPick(PickSpaceError):
    def __init__(self, message, min_eig=None):
        super().__init__(message)
        self.min_eig = min_eig


class ZeroDelta(PickSpaceError):
    pass


class NotNormalized(PickSpaceError):
    pass


class NotInRange(PickSpaceError):
    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class RangeInclusionFails(PickSpaceError):
    """Douglas-type inclusion ``T C1 C1* T* <= C2 C2*`` is violated.

    ``witness`` is the most negative eigenvalue of the difference and
    ``vector`` the matching eigenvector (ambient coordinates).
    """

    def __init__(self, message, witness=None, vector=None):
        super().__init__(message)
        self.witness = witness
        self.vector = vector


class NotInvariant(PickSpaceError):
    def __init__(self, message, min_eig=None):
        super().__init__(message)
        self.min_eig = min_eig


class NotIsometric(PickSpaceError):
    pass


class SingularResolvent(PickSpaceError):
    pass


class ConditionsViolated(PickSpaceError):
    def __init__(self, message, failed=()):
        super().__init__(message)
        self.failed = tuple(failed)


class SearchFailed(PickSpaceError):
    pass
