"""Exception hierarchy.

``InputError`` subclasses describe bad user input (CLI exit code 2);
``CheckFailure`` subclasses mean a mathematical identity did not hold on the
data (CLI exit code 1).
"""


class FusionKitError(Exception):
    def to_dict(self):
        return {"error": type(self).__name__, "message": str(self)}


class InputError(FusionKitError, ValueError):
    pass


class CheckFailure(FusionKitError, ArithmeticError):
    pass


# modular data
class NotCoprime(InputError):
    pass


class OutOfRange(InputError, IndexError):
    pass


class NotEvenLattice(InputError):
    pass


class NotPositiveDefinite(InputError):
    pass


class WrongCosetCount(InputError):
    pass


class InvalidCoset(InputError):
    pass


class MalformedDatum(InputError):
    pass


class AmbiguousMinimalWeight(CheckFailure):
    pass


# fusion
class NonIntegerFusion(CheckFailure):
    def __init__(self, i, j, k, value):
        super().__init__(f"N[{i},{j}]^{k} = {value} is not within tolerance of an integer")
        self.i, self.j, self.k, self.value = i, j, k, value


class NegativeFusion(CheckFailure):
    pass


class EmptyFusionProduct(CheckFailure):
    pass


# quantum dimensions
class ComplexRatio(CheckFailure):
    pass


class NotPositive(CheckFailure):
    pass


class BelowOne(CheckFailure):
    pass


class NotDominant(InputError):
    pass


class LevelExceeded(InputError):
    pass


class RankUnsupported(InputError):
    pass


# series / limits
class AllZeroDenominator(CheckFailure):
    pass


class NoAdmissiblePoints(CheckFailure):
    pass


# spectral
class NoConvergence(CheckFailure):
    pass


# groups
class NotLatinSquare(InputError):
    pass


class NoIdentity(InputError):
    pass


class NotAssociative(InputError):
    pass


class MissingInverse(InputError):
    pass


class OrderTooLarge(InputError):
    pass


class NotSubgroup(InputError):
    pass
