"""Exception taxonomy shared across the package."""


class PacgeomError(Exception):
    """Base class for all package errors."""


class DomainError(PacgeomError):
    """Point outside the chart box."""


class UsageError(PacgeomError):
    """Operation applied to arguments it does not support."""


class DegeneracyError(PacgeomError):
    """Metric (or plane) degenerate at a sampled point."""


class PlaneDegeneracyError(DegeneracyError):
    """Null 2-plane handed to the sectional curvature."""


class StructureError(PacgeomError):
    """Structure axioms violated beyond tolerance."""


class SignatureError(StructureError):
    """Compatible metric does not have signature (n+1, n)."""


class NullPivotError(PacgeomError):
    """No usable pivot found while building a pseudo-orthonormal basis."""


class ConstructionFailureError(PacgeomError):
    """Compatible-metric construction produced a degenerate output."""


class NotSkewError(PacgeomError):
    """Skew-torsion connection requested but N^(1) is not totally skew."""


class NotKillingError(PacgeomError):
    """Skew-torsion connection requested but the Reeb field is not Killing."""


class PositivityError(PacgeomError):
    """Gauge factor fails to be positive on the sample set."""


class ParameterError(PacgeomError):
    """Inadmissible deformation parameter."""


class DegenerateScaleError(PacgeomError):
    """Scalar curvature sits at the value excluded by the Einstein deformation."""


class PreconditionError(PacgeomError):
    """Operation precondition not met by the supplied structure."""
