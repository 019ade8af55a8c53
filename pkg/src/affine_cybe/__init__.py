"""Exact certification toolkit for solutions of the classical Yang-Baxter
equation, the left-symmetric algebras they induce, Manin doubles and the
associated polynomial Poisson tensors."""

__version__ = "0.1.0"

from .lie_core import AlgebraError, LieAlgebra  # noqa: E402
from .rmatrix import Bivector, SymplecticForm  # noqa: E402

__all__ = ["AlgebraError", "LieAlgebra", "Bivector", "SymplecticForm", "__version__"]
