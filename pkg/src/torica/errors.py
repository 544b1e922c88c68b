"""Exception hierarchy shared by all torica modules."""

from __future__ import annotations


class ToricaError(Exception):
    """Base class for every error raised by this package."""


class FanError(ToricaError):
    pass


class TooFewRays(FanError):
    pass


class NonPrimitiveRay(FanError):
    def __init__(self, index: int, ray):
        self.index = index
        self.ray = ray
        super().__init__(f"ray {index} = {tuple(ray)} is not primitive")


class NotUnimodular(FanError):
    def __init__(self, index: int, det: int, next_index: int | None = None):
        self.index = index
        self.det = det
        j = index + 1 if next_index is None else next_index
        super().__init__(f"det(v[{index}], v[{j}]) = {det}, expected 1")


class NotComplete(FanError):
    def __init__(self, winding: int):
        self.winding = winding
        super().__init__(f"rays wind {winding} times around the origin, expected 1")


class NotRealizable(FanError):
    pass


class NotMinusOneCurve(FanError):
    pass


class DivisorError(ToricaError):
    pass


class FanMismatch(DivisorError):
    pass


class InconsistentDegrees(DivisorError):
    pass


class NotAmple(DivisorError):
    pass


class AdjacentContractions(ToricaError):
    pass


class IndexMismatch(ToricaError):
    pass


class EulerTooSmall(ToricaError):
    pass


class RankNotTwo(ToricaError):
    pass


class NotUnstable(ToricaError):
    pass


class NonPositiveSquare(ToricaError):
    pass


class NoAmpleFound(ToricaError):
    pass
