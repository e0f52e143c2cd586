"""Exception types shared across the package."""


class CumulantError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(CumulantError, ValueError):
    """An argument lies outside the domain of an operation."""


class SizeLimitError(CumulantError, ValueError):
    """A requested size exceeds the configured enumeration cap."""


class OrderError(DomainError):
    """Two partitions are not comparable in the required direction."""


class UnboundMomentError(CumulantError, KeyError):
    """A moment (or polynomial atom) was needed but has no binding."""

    def __init__(self, word, tag=""):
        self.word = tuple(word)
        self.tag = tag
        super().__init__(word)

    def __str__(self):
        label = f"{self.tag}:" if self.tag else ""
        return f"unbound moment {label}({','.join(map(str, self.word))})"


class OracleError(CumulantError, AssertionError):
    """An internal consistency check between two computation routes failed."""
