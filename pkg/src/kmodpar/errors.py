"""Exception types shared across the package."""


class ShapeMismatch(ValueError):
    """Operand shapes are incompatible for the requested operation."""


class NotHermitian(ValueError):
    """A matrix required to be Hermitian fails the symmetry check."""


class NotPositiveSemidefinite(ValueError):
    """A matrix has an eigenvalue below the PSD clamping threshold."""


class DegenerateInput(ValueError):
    """A nonzero operand was required (e.g. norm-attaining projection of 0)."""


class NotParallel(ValueError):
    """A witness was requested for a pair that is not norm-parallel."""


class SchemaError(ValueError):
    """A JSON document does not match the expected schema."""
