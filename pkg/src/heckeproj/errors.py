"""Exception hierarchy shared by all modules."""


class HeckeProjError(Exception):
    """Base class; the CLI maps every subclass to exit code 2."""


class NotHermitian(HeckeProjError):
    pass


class NotIdempotent(HeckeProjError):
    pass


class BadDimension(HeckeProjError):
    pass


class DimensionMismatch(HeckeProjError):
    pass


class DimensionOverflow(HeckeProjError):
    pass


class NoConvergence(HeckeProjError):
    pass


class SiteOutOfRange(HeckeProjError):
    pass


class BadRank(HeckeProjError):
    pass


class OddRank(HeckeProjError):
    pass


class InconsistentK(HeckeProjError):
    """Rank-based k and multiplicity-based k disagree."""


class NonRealTrace(HeckeProjError):
    pass


class CommutingProjections(HeckeProjError):
    pass


class InconsistentEstimators(HeckeProjError):
    pass


class DefectMismatch(HeckeProjError):
    pass


class NotOrthonormal(HeckeProjError):
    pass


class RankDeficientFamily(HeckeProjError):
    pass


class BadParameters(HeckeProjError):
    pass


class DegenerateParameters(BadParameters):
    pass


class NotTLWeights(BadParameters):
    pass


class NonRealQ(HeckeProjError):
    pass


class SingularR(HeckeProjError):
    pass


class NotIsometry(HeckeProjError):
    pass


class RankDrift(HeckeProjError):
    pass
