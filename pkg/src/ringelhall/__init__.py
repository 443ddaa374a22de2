"""Exact Ringel-Hall algebra computations for Dynkin and tame quivers over finite fields."""

from .quiver import Quiver, builtin, load_quiver, parse_quiver
from .field import GF
from .rep import Rep
from .catalog import CatalogMiss, ModuleClass, get_catalog
from .hallnum import BudgetExceeded, HallCount, get_calculator

__all__ = [
    "Quiver",
    "builtin",
    "load_quiver",
    "parse_quiver",
    "GF",
    "Rep",
    "CatalogMiss",
    "ModuleClass",
    "get_catalog",
    "BudgetExceeded",
    "HallCount",
    "get_calculator",
]

__version__ = "0.1.0"
