"""Shared exception types."""


class DomainError(ValueError):
    """A parameter lies outside the admissible domain (e.g. Im tau <= 0)."""


class SingularityError(ValueError):
    """An evaluation point is inside the pole-exclusion zone of a singularity."""


class InstabilityError(RuntimeError):
    """A limit-extraction oracle disagreed with itself beyond tolerance."""


class NonUnitaryError(RuntimeError):
    """R12(z) R21(-z) failed to be proportional to the identity."""


class OrbitError(ValueError):
    """A field violates the required coadjoint-orbit condition S^2 = c S."""


class SolveError(RuntimeError):
    """An auxiliary-matrix solve failed to satisfy its defining constraint."""
