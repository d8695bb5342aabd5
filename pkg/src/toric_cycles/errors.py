"""Exception hierarchy.

Everything a caller can provoke by handing in mathematically unusable data
derives from :class:`ToricError`; the CLI maps those to exit status 1.
Malformed documents raise :class:`SchemaError` instead (exit status 2).
"""

from __future__ import annotations


class ToricError(Exception):
    """Base class for mathematical precondition failures."""


class SchemaError(ValueError):
    """A document or argument does not follow the expected format."""

    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


# exact-linalg
class InconsistentSystem(ToricError):
    pass


class LatticeError(ToricError):
    pass


class NotSaturated(LatticeError):
    pass


# fans
class FanError(ToricError):
    pass


class NonPrimitiveRay(FanError):
    pass


class NotStronglyConvex(FanError):
    pass


class IntersectionNotAFace(FanError):
    pass


class RayNotExtremal(FanError):
    pass


class NotAFacetPair(FanError):
    pass


class FanMismatch(ToricError):
    pass


class NotSimplicial(ToricError):
    pass


# divisors
class AgreementViolation(ToricError):
    def __init__(self, sigma, other, shared):
        self.sigma, self.other, self.shared = sigma, other, shared
        super().__init__(
            f"local equations on {sorted(sigma)} and {sorted(other)} "
            f"disagree on their common face {sorted(shared)}"
        )


class CorrespondenceFailed(ToricError):
    pass


class NotZeroDimensional(ToricError):
    pass


# complements
class NotPositiveDefinite(ToricError):
    pass


class NotSymmetric(ToricError):
    pass


class NotGeneric(ToricError):
    def __init__(self, cone):
        self.cone = cone
        super().__init__(f"flag is not generic at cone {sorted(cone)}")


class ComplementarityFailed(ToricError):
    def __init__(self, cone):
        self.cone = cone
        super().__init__(f"subspace is not complementary to the perp of {sorted(cone)}")


class NestednessFailed(ToricError):
    def __init__(self, face, cone):
        self.face, self.cone = face, cone
        super().__init__(f"complement of {sorted(face)} not contained in that of {sorted(cone)}")


class IncompatibleAt(ToricError):
    def __init__(self, cone):
        self.cone = cone
        super().__init__(f"complement choices incompatible at source cone {sorted(cone)}")


# intersection
class NotProper(ToricError):
    pass


class NotHomogeneous(ToricError):
    pass


class FlagDegenerateAt(ToricError):
    def __init__(self, cone):
        self.cone = cone
        super().__init__(f"flag normal is degenerate for cone {sorted(cone)}")


# cycle ring
class SingularA(ToricError):
    pass


class ZeroCoefficient(ToricError):
    pass


# morphisms
class ConeNotMapped(ToricError):
    def __init__(self, cone):
        self.cone = cone
        super().__init__(f"image of source cone {sorted(cone)} lies in no target cone")


class RayOutsideSupport(ToricError):
    pass


class CannotSimplicialize(ToricError):
    pass


class IrrationalAngle(ToricError):
    pass


class FormulaExtensionWarning(UserWarning):
    """A formula is applied outside the smooth setting it was derived for."""
