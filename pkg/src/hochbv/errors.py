"""Exception types shared across the package."""


class ParentMismatch(ValueError):
    """Operands belong to different parent algebras or rings."""


class ExponentOutOfRange(ValueError):
    """Basis exponent outside [0, n]."""


class CompositionNonzero(ValueError):
    """d_out . d_in != 0 where a complex was expected."""


class InhomogeneousCochain(ValueError):
    """Operation requires a cochain concentrated in one bidegree."""


class InhomogeneousElement(ValueError):
    """Operation requires a homogeneous element of a graded algebra."""


class LevelOutOfRange(ValueError):
    """Resolution level outside the computed range."""


class TransferMismatch(ValueError):
    """Transferred Delta-operator disagrees with its closed form."""


class UnstableTruncation(ValueError):
    """Negative cyclic answer changed when the window was enlarged."""


class NotACocycle(ValueError):
    """Element fails the cocycle condition of the total complex."""


class InvalidParameters(ValueError):
    """Parameters outside the supported range."""


class ConfigError(ValueError):
    """Malformed CLI job configuration."""
