"""Exception hierarchy.

Row-level parser diagnostics reuse the class names below as their ``code``
field, so a rejected CSV row and a failed constructor report the same thing.
"""


class DecarbError(ValueError):
    """Base class for every domain error raised by this package."""

    @property
    def code(self) -> str:
        return type(self).__name__


# record validation
class NonPositiveValue(DecarbError):
    pass


class NegativeValue(DecarbError):
    pass


class NonNumericField(DecarbError):
    pass


class ServiceGdpExceedsGdp(DecarbError):
    pass


class UnknownSector(DecarbError):
    pass


class UnknownEndUse(DecarbError):
    pass


class InvalidEndUseForSector(DecarbError):
    pass


class EmissionsWithoutEnergy(DecarbError):
    pass


# factor identity
class MissingEndUse(DecarbError):
    pass


class DuplicateEndUse(DecarbError):
    pass


class MixedKeys(DecarbError):
    pass


class NonPositiveDenominator(DecarbError):
    pass


class UndefinedFactor(DecarbError):
    pass


# decomposition
class NonPositiveInput(DecarbError):
    pass


class NonPositiveFactor(DecarbError):
    pass


class SectorMismatch(DecarbError):
    pass


class DegenerateState(DecarbError):
    pass


class IdentityMismatch(DecarbError):
    pass


class InvalidWindow(DecarbError):
    pass


class GapInSeries(DecarbError):
    pass


class FewerThanTwoYears(DecarbError):
    pass


# assessment
class ActivitySectorMismatch(DecarbError):
    pass


class ZeroEmissions(DecarbError):
    pass


class ZeroTotal(DecarbError):
    pass


class OverlappingStages(DecarbError):
    pass


class UncoveredYears(DecarbError):
    pass


class YearMismatch(DecarbError):
    pass


# ingestion / reporting
class MissingHeader(DecarbError):
    pass


class UnknownColumn(DecarbError):
    pass


class RegionNotCovered(DecarbError):
    pass


class WindowOutsideCoverage(DecarbError):
    pass


class UnwritablePath(DecarbError):
    pass
