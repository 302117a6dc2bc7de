"""2-Opt analysis laboratory for the Euclidean TSP."""
from .geometry import Point, Segment
from .tsp_core import Family, Instance, OrientedTour, exact_optimum, generate_instance, tour_length
from .two_opt import Policy, is_simple, is_two_optimal, run_two_opt
from .uncross import enumerate_crossings, is_crossing_free, subdivide_pair
from .partition import classify_edges, partition_all
from .dual_arbor import build_arborescence, build_regions, pipeline_arborescences
from .harness import ExperimentConfig, run_pipeline

__version__ = "0.1.0"

__all__ = [
    "ExperimentConfig",
    "Family",
    "Instance",
    "OrientedTour",
    "Point",
    "Policy",
    "Segment",
    "build_arborescence",
    "build_regions",
    "classify_edges",
    "enumerate_crossings",
    "exact_optimum",
    "generate_instance",
    "is_crossing_free",
    "is_simple",
    "is_two_optimal",
    "partition_all",
    "pipeline_arborescences",
    "run_pipeline",
    "run_two_opt",
    "subdivide_pair",
    "tour_length",
]
