"""Exception hierarchy shared across the package."""


class HybridJacError(Exception):
    """Base class for all domain errors."""


class InputError(HybridJacError):
    """Malformed or inconsistent input data."""


class DuplicateId(InputError):
    pass


class NonpositiveLength(InputError):
    pass


class Disconnected(InputError):
    pass


class PlaceOffGraph(InputError):
    pass


class PlaceOffComplex(InputError):
    pass


class NonzeroDegree(InputError):
    pass


class NonIntegerSlope(InputError):
    pass


class DegenerateLattice(InputError):
    pass


class MarkedSlotMismatch(InputError):
    pass


class SlotBijectionBroken(InputError):
    pass


class DimensionMismatch(InputError):
    pass


class UnknownPoint(InputError):
    pass


class MissingBasepointPoint(InputError):
    pass


class IrrationalTargetInExactMode(InputError):
    pass


class BoundsInfeasible(InputError):
    pass


class UnknownSuite(InputError):
    pass


class RankDeficient(HybridJacError):
    """The assembled lattice is not of full rank; signals bad surface data."""


class AmbiguousMembership(HybridJacError):
    """Float-mode coordinate fell into the ambiguity band around an integer."""


class InternalDisagreement(HybridJacError):
    """The two independent decision routes disagree.  Always a bug."""
