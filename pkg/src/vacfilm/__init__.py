"""Vacuum-fluctuation forces on thin metal films and their effect on film stability."""

__version__ = "0.1.0"

from .physmodels import CONSTANTS, DielectricModel, DomainError, LayerStack, UsageError  # noqa: E402
from .lifshitz import QuadratureSpec, VacuumQuantities, vacuum_quantities  # noqa: E402
from .elastic import FilmElasticParams  # noqa: E402
from .stability import Method  # noqa: E402

__all__ = ["CONSTANTS", "DielectricModel", "DomainError", "FilmElasticParams", "LayerStack",
           "Method", "QuadratureSpec", "UsageError", "VacuumQuantities", "__version__",
           "vacuum_quantities"]
