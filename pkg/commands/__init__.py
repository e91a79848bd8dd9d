from .graph import register as register_graph
from .basis import register as register_basis
from .interpolate import register as register_interpolate
from .insert import register as register_insert
from .experiments import register as register_experiments

__all__ = [
    "register_graph",
    "register_basis",
    "register_interpolate",
    "register_insert",
    "register_experiments",
]
