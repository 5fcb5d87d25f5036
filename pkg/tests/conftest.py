"""Shared fixtures and the acceptance pass/fail reporter."""

from __future__ import annotations

import numpy as np
import pytest

from clothbench.masks import GrayImage


def pytest_runtest_logreport(report):
    """One visible PASS/FAIL line per acceptance criterion."""
    if report.when != "call" or "test_acceptance" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    outcome = "PASS" if report.passed else "FAIL"
    print(f"\n[acceptance] {name}: {outcome}", flush=True)


def disk_image(height: int, width: int, cx: int, cy: int, radius: int,
               fg: int = 0, bg: int = 255) -> GrayImage:
    """Dark disk on a light background (cloth-darker polarity)."""
    yy, xx = np.mgrid[0:height, 0:width]
    pixels = np.full((height, width), bg, dtype=np.uint8)
    pixels[(xx - cx) ** 2 + (yy - cy) ** 2 <= radius * radius] = fg
    return GrayImage(pixels)


@pytest.fixture
def make_disk_image():
    return disk_image
