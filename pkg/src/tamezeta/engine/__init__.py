from ..cover import CoverError, CoverSpec
from .cohomology import (
    Eigenspace,
    Engine,
    EngineError,
    FrobeniusMatrix,
    NonRationalError,
    char_poly_int,
    frobenius_p_step,
    frobenius_q,
    get_engine,
    h1_basis,
    modp_euler,
    reduce_form,
)
from .zeta import ZetaResult, counts_from_zeta, zeta
from .zqnum import PrecisionError

__all__ = [
    "CoverError",
    "CoverSpec",
    "Eigenspace",
    "Engine",
    "EngineError",
    "FrobeniusMatrix",
    "NonRationalError",
    "PrecisionError",
    "ZetaResult",
    "char_poly_int",
    "counts_from_zeta",
    "frobenius_p_step",
    "frobenius_q",
    "get_engine",
    "h1_basis",
    "modp_euler",
    "reduce_form",
    "zeta",
]
