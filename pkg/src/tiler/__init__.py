"""Følner tilings, tight multipackings and hyperfinite sequences on finite bounded-degree graphs."""

from .graph import Graph, GraphInputError, generate
from .packing import Packing
from .witness import WitnessFamily
from .multipack import Multipacking
from .harness import RunConfig, RunReport, run, run_pipeline

__all__ = [
    "Graph",
    "GraphInputError",
    "Multipacking",
    "Packing",
    "RunConfig",
    "RunReport",
    "WitnessFamily",
    "generate",
    "run",
    "run_pipeline",
]
__version__ = "0.1.0"
