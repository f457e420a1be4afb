class KaclabError(Exception):
    """Base class for errors raised by kaclab."""


class InvalidLawError(KaclabError, ValueError):
    pass


class InvalidSizeError(KaclabError, ValueError):
    pass


class DomainError(KaclabError, ValueError):
    """Arguments outside the domain where a bound or lemma applies."""


class FitUndefinedError(KaclabError, ValueError):
    pass


class GuardExceededError(KaclabError, ValueError):
    """Requested work exceeds the desk-scale guard."""
