"""Dirichlet series, the Bohr transform and numerics on the polytorus."""
from .errors import (
    BadBase,
    BohrError,
    BoundExceeded,
    DegenerateDegree,
    DimensionMismatch,
    HorizonTooSmall,
    IndexOverflow,
    ParseError,
    PreconditionViolation,
    UnsortedInput,
)
from .kernel import MultiIndex, PrimeTable, default_table, factor_to_index, index_to_integer
from .multiplier import HardySpace, MultiplicativeSeq, classify, verdict_table
from .seqlab import SequenceSpec, Space, b_functional, space_membership
from .series import CoeffSeries, TrigPolynomial, bohr_lift, bohr_transform

__version__ = "0.1.0"
