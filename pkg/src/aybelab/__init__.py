"""aybelab: associative Yang-Baxter R-matrices and the integrable models
built from their quasi-classical expansions."""

from .errors import (
    DomainError,
    InstabilityError,
    NonUnitaryError,
    OrbitError,
    SingularityError,
)
from .rmat import RFamily

__all__ = [
    "DomainError",
    "InstabilityError",
    "NonUnitaryError",
    "OrbitError",
    "SingularityError",
    "RFamily",
]

__version__ = "0.1.0"
