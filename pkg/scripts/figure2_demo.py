"""Walk through the decision rule on the small circle-vs-segment fixture.

Prints d1, d2 for the single unlabeled point and the outcome at a few thresholds.
"""
from pathlib import Path

import numpy as np

from topolabel.annotator import Annotator, AnnotatorConfig, decide
from topolabel.distances import DiagramMetric
from topolabel.geometry import normalize, read_csv

FIXTURE = Path(__file__).resolve().parent.parent / "tests" / "data" / "figure2.csv"

cloud = normalize(read_csv(FIXTURE))
labels = np.array([0 if lab is None else lab for lab in cloud.labels])
X1 = cloud.subset(np.flatnonzero(labels == 1))
X2 = cloud.subset(np.flatnonzero(labels == 2))
x = cloud.points[np.flatnonzero(labels == 0)[0]]

for kind in ("bottleneck", "wasserstein"):
    annotator = Annotator(X1, X2, AnnotatorConfig(metric=DiagramMetric(kind)))
    (d1, d2), = annotator.distances(x)
    outcomes = {t: decide(d1, d2, t).value for t in (0.8, 0.6, 0.4, 0.2, 0.1, 0.0)}
    print(f"{kind:<12} d1={d1:.4f} d2={d2:.4f} outcomes={outcomes}")
