import numpy as np
import pytest

from topolabel.geometry import PointCloud


def two_blobs(seed=7, per_class=40, sigma=0.3, separation=10.0):
    """Two isotropic Gaussian blobs in the plane, labels 1 and 2."""
    rng = np.random.default_rng(seed)
    a = rng.normal([0.0, 0.0], sigma, (per_class, 2))
    b = rng.normal([separation, 0.0], sigma, (per_class, 2))
    return PointCloud(np.vstack([a, b]), labels=[1] * per_class + [2] * per_class,
                      feature_names=("f1", "f2"))


def write_cloud_csv(path, cloud):
    lines = [",".join(cloud.feature_names) + ",label"]
    for p, lab in zip(cloud.points, cloud.labels):
        lines.append(",".join(repr(float(v)) for v in p) + "," + ("" if lab is None else str(lab)))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def blobs():
    return two_blobs()


@pytest.fixture
def blobs_csv(tmp_path):
    return write_cloud_csv(tmp_path / "blobs.csv", two_blobs())


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            nodeid = getattr(rep, "nodeid", "")
            if "test_acceptance.py::" in nodeid and getattr(rep, "when", "call") == "call":
                lines.append((nodeid.split("::")[-1], "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for name, status in sorted(lines):
            terminalreporter.write_line(f"{status}  {name}")
