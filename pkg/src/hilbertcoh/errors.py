"""Exception types shared by all modules."""


class HilbertCohError(Exception):
    pass


class UnsupportedField(HilbertCohError):
    pass


class UnsupportedConfiguration(HilbertCohError):
    pass


class ZeroDivisorPivot(HilbertCohError):
    pass


class NotSubspace(HilbertCohError):
    pass


class FactorizationIncomplete(HilbertCohError):
    """Carries the factors found so far and the unfactored remainder."""

    def __init__(self, factors, remainder):
        super().__init__("could not split remainder of degree %d" % remainder.degree())
        self.factors = factors
        self.remainder = remainder


class SingularMatrix(HilbertCohError):
    pass


class NotParabolic(HilbertCohError):
    pass


class LiftRecursionLimit(HilbertCohError):
    pass


class RelationFailed(HilbertCohError):
    pass


class NotARelation(HilbertCohError):
    pass


class DivisibilityViolated(HilbertCohError):
    pass


class ReductionStuck(HilbertCohError):
    """Carries the irreducible core (list of P*-blocks)."""

    def __init__(self, core):
        super().__init__("no applicable rule on a %d-term relation" % len(core))
        self.core = core


class NotPrime(HilbertCohError):
    pass


class NoMatchingCoset(HilbertCohError):
    pass


class LetterAlphabetViolation(HilbertCohError):
    pass


class TorsionCheckFailed(HilbertCohError):
    pass


class SubspaceViolation(HilbertCohError):
    pass


class NormalizationInfeasible(HilbertCohError):
    pass


class AssertionFailed(HilbertCohError):
    pass


class MultiplicityTooHigh(HilbertCohError):
    pass
