"""Exception types shared across the package."""

from __future__ import annotations


class SigmapermError(Exception):
    """Base class for errors raised by this package."""


class CycleParseError(SigmapermError, ValueError):
    """Malformed cycle notation, or a point outside the declared degree."""


class DegreeMismatchError(SigmapermError, ValueError):
    """Operands act on different point sets."""


class DegreeCapError(SigmapermError, ValueError):
    """Requested degree exceeds the supported maximum."""


class OrderCapError(SigmapermError, RuntimeError):
    """Generated group grew past the configured element-count cap."""


class WorkLimitError(SigmapermError, RuntimeError):
    """Subgroup enumeration exceeded its work limit."""


class ParentMismatchError(SigmapermError, ValueError):
    """Subgroups of different parent groups were combined."""


class NotNormalError(SigmapermError, ValueError):
    """Quotient requested by a subgroup that is not normal."""


class SigmaError(SigmapermError, ValueError):
    """Invalid prime partition for the group at hand."""


class GroupSpecError(SigmapermError, ValueError):
    """Unparseable or unsupported group spec string."""


class UnknownClaimError(SigmapermError, ValueError):
    """Claim identifier not recognised by the verification harness."""


class InvariantViolation(SigmapermError, RuntimeError):
    """An internal guarantee failed; indicates a bug in this package."""
