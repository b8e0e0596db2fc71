"""Rack-aware regenerating codes with few helper racks.

A scalar minimum-storage code and an array minimum-bandwidth code for
clusters of n nodes in nbar racks of u, where a failed node is rebuilt
from its rack's other u - 1 nodes plus one symbol from each of dbar
helper racks.  Also included: the cut-set bound and tradeoff extremes,
an overhead sweep, a traffic-metering cluster simulator, and a CLI with
an on-disk encoded-file format.
"""

from .errors import FormatError, ParameterError, SingularSystemError, VerificationError
from .field import (
    FieldSpec,
    Gf256Field,
    PrimeField,
    derive_eta,
    eval_points,
    find_primitive,
    make_field,
    multiplicative_order,
)
from .linalg import (
    Matrix,
    constrained_interpolate,
    gaussian_solve,
    lagrange_leading_coefficient,
    lagrange_leading_weights,
    vandermonde_solve,
)
from .mbrr import MbrrCode, message_size, pack_message, unpack_message
from .msrr import MsrrCode
from .params import (
    MBRR,
    MSRR,
    SystemParams,
    TradeoffPoint,
    cutset_bound,
    mbrr_point,
    mincut_profile,
    msrr_point,
    overhead_pair,
)
from .sim import Cluster, RepairPolicy, TrafficLog, sweep_table

__version__ = "0.1.0"

__all__ = [
    "Cluster",
    "FieldSpec",
    "FormatError",
    "Gf256Field",
    "Matrix",
    "MbrrCode",
    "MsrrCode",
    "ParameterError",
    "PrimeField",
    "RepairPolicy",
    "SingularSystemError",
    "SystemParams",
    "TradeoffPoint",
    "TrafficLog",
    "VerificationError",
    "constrained_interpolate",
    "cutset_bound",
    "derive_eta",
    "eval_points",
    "find_primitive",
    "gaussian_solve",
    "lagrange_leading_coefficient",
    "lagrange_leading_weights",
    "make_field",
    "mbrr_point",
    "message_size",
    "mincut_profile",
    "msrr_point",
    "multiplicative_order",
    "overhead_pair",
    "pack_message",
    "sweep_table",
    "unpack_message",
    "vandermonde_solve",
    "MBRR",
    "MSRR",
    "__version__",
]
