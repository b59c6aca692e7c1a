"""Exception types shared across the package."""


class QSeriesError(Exception):
    pass


class DomainError(QSeriesError, ValueError):
    """A parameter lies outside the domain where the object is defined."""


class TailNotReached(QSeriesError):
    """The tail bound was not met within ``max_terms`` terms."""


class PoleInLower(QSeriesError):
    """A denominator q-shifted factorial vanished."""


class OutOfRange(QSeriesError, ValueError):
    pass


class SingularSeries(QSeriesError, ZeroDivisionError):
    """Power series with (numerically) zero constant term cannot be inverted."""


class ZeroPoint(QSeriesError, ValueError):
    """q-derivative requested at x = 0."""


class ZeroParameter(QSeriesError, ValueError):
    pass


class DomainTooTight(QSeriesError):
    """Rejection sampling hit its attempt cap."""
