"""Exception types shared across divlab modules."""


class DivlabError(Exception):
    """Base class for all divlab errors."""


class RangeError(DivlabError, ValueError):
    """An argument is outside its documented range."""


class InsufficientTableError(DivlabError, ValueError):
    """The supplied prime table cannot certify the requested computation."""


class ResourceLimitError(DivlabError, RuntimeError):
    """A configured memory or enumeration budget would be exceeded."""


class OracleLimitError(DivlabError, ValueError):
    """Input is outside the regime a brute-force oracle supports."""
