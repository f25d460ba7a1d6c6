"""Exception types raised across the package."""


class MajoranaEurError(Exception):
    """Base class for all package errors."""


class NotHermitian(MajoranaEurError):
    def __init__(self, deviation: float):
        super().__init__(f"matrix is not Hermitian (max deviation {deviation:.3e})")
        self.deviation = deviation


class NoConvergence(MajoranaEurError):
    def __init__(self, iterations: int):
        super().__init__(f"Jacobi eigensolver did not converge after {iterations} sweeps")
        self.iterations = iterations


class DimensionMismatch(MajoranaEurError):
    pass


class UnsupportedConfiguration(MajoranaEurError):
    pass


class DegenerateDelta(MajoranaEurError):
    """Raised when omega = lambda = 0, so that Delta vanishes."""


class SectorMismatch(MajoranaEurError):
    """The numeric ground space does not contain the analytic ground state."""


class UnknownLabel(MajoranaEurError):
    pass


class BadPermutation(MajoranaEurError):
    pass


class InvalidState(MajoranaEurError):
    pass


class ZeroProbabilityOutcome(MajoranaEurError):
    pass
