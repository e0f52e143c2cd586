"""Exact cumulants for exchangeability systems.

Partition lattices and their Moebius functions, exact scalar rings, concrete
exchangeability systems (tensor, mixture, free, boolean, conditionally free,
graded, type B, matrix lift), Moebius-inversion cumulants and the
root-of-unity oracle that checks them.
"""
from .engine import (
    CumulantTable,
    GroupedWord,
    brillinger,
    classical_recursion,
    cumulant,
    cumulant_partitioned,
    cumulant_table,
    free_from_classical,
    indecomposable_partitions,
    mixed_cumulant_audit,
    moment_from_cumulants,
    product_cumulant,
    recursion_moment,
    remove_identity_check,
)
from .errors import (
    CumulantError,
    DomainError,
    OracleError,
    OrderError,
    SizeLimitError,
    UnboundMomentError,
)
from .good import good_cumulant, good_partitioned, good_weights
from .moments import Moments, RandomMoments, SymbolicMoments, ZeroMoments
from .partitions import SetPartition, kernel
from .rings import CycloElement, DualPair, MatrixScalar, MomentPoly
from .systems import (
    BooleanSystem,
    CFreeSystem,
    ExchangeabilitySystem,
    FreeSystem,
    GradedSystem,
    MatrixLift,
    MixtureSystem,
    TensorSystem,
    TypeBSystem,
    Variable,
)

__version__ = "0.1.0"
