"""Exception types shared across the engine."""


class QShapeError(Exception):
    pass


class MalformedRelation(QShapeError):
    pass


class HomInfinite(QShapeError):
    """A hom space did not stabilise within the path-length bound."""


class NotNilpotent(QShapeError):
    """The pseudo-radical did not vanish within the iteration bound."""


class NoStrongRetraction(QShapeError):
    """Some identity lies in the arrow-generated ideal."""


class UnsupportedFamily(QShapeError):
    pass


class WindowInsufficient(QShapeError):
    """A computation needs more margin than the finite window provides."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class ObjectOutsideWindow(QShapeError):
    pass


class ShapeMismatch(QShapeError):
    pass


class NotExact(QShapeError):
    pass


class NotObjectwiseProjective(QShapeError):
    pass


class TestsetNotProjective(QShapeError):
    pass


class AdjointMismatch(QShapeError):
    pass


class ParseError(QShapeError):
    pass
