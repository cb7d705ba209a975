"""clusterkit: cluster variables of type-A quivers, five ways.

The same Laurent polynomial is produced by seed mutation, two compatibility
formulas (bit sequences and lattice-path collections), perfect matchings of
a snake diagram, T-paths on a polygon triangulation, and broken-line theta
sums; a differential harness certifies exact agreement.
"""

from .errors import ClusterKitError
from .laurent import LaurentPoly, canonical_string, rational_string
from .quiver import (
    CompletelyExtendedLinearQuiver,
    LinearQuiver,
    Quiver,
    complete_extension,
    is_type_a,
    linear_full_subquivers,
    mutate,
)

__all__ = [
    "ClusterKitError",
    "LaurentPoly",
    "canonical_string",
    "rational_string",
    "Quiver",
    "LinearQuiver",
    "CompletelyExtendedLinearQuiver",
    "mutate",
    "is_type_a",
    "linear_full_subquivers",
    "complete_extension",
]

__version__ = "0.1.0"
