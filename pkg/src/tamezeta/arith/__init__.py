from .finitefield import (
    ArithError,
    Character,
    ExtElement,
    ExtField,
    FieldElement,
    FieldSpec,
    build_field,
    char_of_order,
    is_prime,
)
from .padic import (
    PadicContext,
    PadicElement,
    binom_int,
    binom_padic,
    one_unit_pow,
    teichmuller,
)

__all__ = [
    "ArithError",
    "Character",
    "ExtElement",
    "ExtField",
    "FieldElement",
    "FieldSpec",
    "PadicContext",
    "PadicElement",
    "binom_int",
    "binom_padic",
    "build_field",
    "char_of_order",
    "is_prime",
    "one_unit_pow",
    "teichmuller",
]
