"""
Exception types raised by the toolkit
"""


class TrimetricError(ValueError):
    """Base class for all toolkit errors"""


class InvalidInputError(TrimetricError):
    """Non-finite input, bad parameter, or failed precondition"""


class DomainError(InvalidInputError):
    """Point outside a domain, or argument outside a formula's range"""


class NotApplicableError(TrimetricError):
    """Operation requested for a configuration it does not cover"""


class DegenerateTrialError(InvalidInputError):
    """Trial whose metric value is too small for a meaningful ratio"""
