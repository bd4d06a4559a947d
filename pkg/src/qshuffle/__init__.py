"""qshuffle: exact shuffle-algebra models of quantum affine nilpotent currents."""

__version__ = "0.1.0"

from .cartan import CartanData, builtin_cartan
from .qring import LaurentQ, RatQ, q_binomial, q_factorial, q_int
from .shuffle import ClosureViolation, ShuffleAlgebra, ShuffleElement

__all__ = [
    "CartanData",
    "ClosureViolation",
    "LaurentQ",
    "RatQ",
    "ShuffleAlgebra",
    "ShuffleElement",
    "builtin_cartan",
    "q_binomial",
    "q_factorial",
    "q_int",
    "__version__",
]
