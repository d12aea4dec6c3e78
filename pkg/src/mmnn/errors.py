"""Exception types shared across the package."""


class LengthMismatchError(ValueError):
    """Two vectors entering a similarity operation differ in length."""


class AllZeroOperandsError(ValueError):
    """Both vectors of a similarity operation are all-zero; the indices are undefined."""


class NegativeEntryError(ValueError):
    """A vector contains negative entries but the similarity mode is non-negative."""


class OutOfBoundsError(ValueError):
    """A pixel coordinate lies outside the image."""


class DimensionMismatchError(ValueError):
    """Two images or masks that must share dimensions do not."""


class DegenerateGoldError(ValueError):
    """The gold mask contains only one class, so balanced accuracy is undefined."""


class ParseError(ValueError):
    """A configuration, points, or network file could not be parsed."""
