"""Shared fixtures: seeded RNG and the worked two-series example.

The worked pair pins the end-to-end arithmetic: T=16, W=4, A=4, PAA
vectors (-0.70, -0.81, 0.08, 1.50) and (1.72, 0.34, 1.55, 0.49), and a raw
Euclidean distance of 6.71. The first series carries a zero-mean
within-segment wiggle sized so the Euclidean distance lands exactly on
6.71; the second is piecewise constant. Segment means (and therefore PAA
and SAX results) are unaffected by the wiggle.
"""

from __future__ import annotations

import numpy as np
import pytest

PAA_X = np.array([-0.70, -0.81, 0.08, 1.50])
PAA_Y = np.array([1.72, 0.34, 1.55, 0.49])
TARGET_ED = 6.71


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)


@pytest.fixture(scope="session")
def worked_pair() -> tuple[np.ndarray, np.ndarray]:
    seg_len = 4
    d_paa_sq = seg_len * float(np.sum((PAA_X - PAA_Y) ** 2))
    wiggle_sq = TARGET_ED**2 - d_paa_sq
    assert wiggle_sq > 0
    c = np.sqrt(wiggle_sq / 16.0)
    pattern = np.tile([c, -c, c, -c], 4)
    x = np.repeat(PAA_X, seg_len) + pattern
    y = np.repeat(PAA_Y, seg_len)
    return x, y


def random_normalized(rng: np.random.Generator, T: int) -> np.ndarray:
    x = rng.standard_normal(T)
    return (x - x.mean()) / x.std()
