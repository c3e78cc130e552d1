"""Exception types shared across the package."""


class QsliceError(Exception):
    """Base class for all engine errors."""


class ShapeMismatch(QsliceError):
    pass


class NonUniqueSolution(QsliceError):
    pass


class InconsistentSystem(QsliceError):
    pass


class RankTooHigh(QsliceError):
    pass


class NotNilpotent(QsliceError):
    pass


class SumMismatch(QsliceError):
    pass


class NegativeEntry(QsliceError):
    pass


class EmptyVariety(QsliceError):
    pass


class NotAdmissible(QsliceError):
    pass


class Unsatisfiable(QsliceError):
    pass


class NotTransversal(QsliceError):
    pass


class NotStable(QsliceError):
    pass


class WrongFraming(QsliceError):
    pass


class InvalidFlag(QsliceError):
    pass


class ParseError(QsliceError):
    pass
