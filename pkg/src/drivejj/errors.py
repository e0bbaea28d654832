"""Exception taxonomy shared across the package."""


class DriveJJError(Exception):
    """Base class for all drivejj errors."""


class NoMinimumFound(DriveJJError):
    """Potential minimum search failed to bracket or refine a minimum."""


class DegenerateMinimum(DriveJJError):
    """Potential minimum is degenerate or flat (c2 below tolerance)."""


class RootNotConverged(DriveJJError):
    """A transcendental root solve did not converge."""


class NotConverged(DriveJJError):
    """A truncated series failed its convergence check."""


class UnsupportedModel(DriveJJError):
    """The requested operation does not support this circuit model."""


class OnResonance(DriveJJError):
    """Drive frequency too close to the mode frequency for linear response."""


class IllConditioned(DriveJJError):
    """A linear inversion exceeded the conditioning tolerance."""


class FixedPointDiverged(DriveJJError):
    """Self-consistent drive-frequency iteration failed to converge."""


class ResonanceTooClose(DriveJJError):
    """An effective-Hamiltonian denominator is below tolerance."""


class DispersiveViolated(DriveJJError):
    """Dispersive-coupling validity condition violated."""


class BasisMismatch(DriveJJError):
    """Requested basis is incompatible with the model (e.g. non-integer
    cosine frequency in the charge basis, or n_g in the grid basis)."""


class NoFeasiblePoint(DriveJJError):
    """No sweep grid point satisfies all constraints."""


class ConfigError(DriveJJError):
    """A run configuration failed to parse or validate."""
