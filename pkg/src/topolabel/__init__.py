"""Semi-supervised labeling by persistent homology.

A point is given the label of the class whose Vietoris-Rips persistence
diagram it perturbs least, measured with the bottleneck or Wasserstein
distance and gated by a threshold.
"""
from .annotator import (AnnotatorConfig, Annotator, LabelDecision, Outcome, annotate_set,
                        classify_point, decide, threshold_sweep)
from .distances import DiagramMetric, Matching, bottleneck, diagram_distance, wasserstein
from .errors import (ClassTooSmall, DimensionMismatch, EmptyInput, InfiniteCoordinate,
                     IngestError, InvalidFiltration, InvalidOrder, InvalidRadius, TopoLabelError)
from .experiment import AnnotationReport, ExperimentSpec, run_experiment
from .filtration import Filtration, Simplex, build_rips
from .geometry import DistanceMatrix, PointCloud, normalize, normalize_together, pairwise_distances, read_csv
from .persistence import PersistenceDiagram, PersistencePoint, compute_persistence, finitize

__all__ = [
    "AnnotationReport", "Annotator", "AnnotatorConfig", "ClassTooSmall", "DiagramMetric",
    "DimensionMismatch", "DistanceMatrix", "EmptyInput", "ExperimentSpec", "Filtration",
    "InfiniteCoordinate", "IngestError", "InvalidFiltration", "InvalidOrder", "InvalidRadius",
    "LabelDecision", "Matching", "Outcome", "PersistenceDiagram", "PersistencePoint", "PointCloud",
    "Simplex", "TopoLabelError", "annotate_set", "bottleneck", "build_rips", "classify_point",
    "compute_persistence", "decide", "diagram_distance", "finitize", "normalize",
    "normalize_together", "pairwise_distances", "read_csv", "run_experiment", "threshold_sweep",
    "wasserstein",
]
