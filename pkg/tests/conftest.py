import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parents[1]
FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE_TSV = ROOT / "data" / "fixture_60.tsv"


def wnut_dir():
    """Directory holding the official shared-task files, or None when absent."""
    d = Path(os.environ.get("TWEETSIFT_WNUT_DIR", ROOT / "data" / "wnut"))
    if (d / "train.tsv").is_file() and (d / "valid.tsv").is_file():
        return d
    return None


def separable_svm_set(seed=0, n=200, dim=20, margin=0.5):
    """Points in [-1, 1]^dim with |u.x| >= margin for a unit normal u through the origin."""
    rng = np.random.default_rng(seed)
    u = rng.normal(size=dim)
    u /= np.linalg.norm(u)
    pts, ys = [], []
    while len(pts) < n:
        x = rng.uniform(-1, 1, size=dim)
        s = float(u @ x)
        if abs(s) >= margin:
            pts.append(x)
            ys.append(1 if s > 0 else -1)
    return np.array(pts), np.array(ys)


@pytest.fixture
def fixture_tsv():
    return FIXTURE_TSV
