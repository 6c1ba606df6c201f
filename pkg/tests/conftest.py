from typing import Iterator

import numpy as np
import pytest

from gl11.algebra import graded
from gl11.fusion import fused


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240917)


@pytest.fixture
def flat_signs(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Drop every grading sign, turning the graded algebra into an ungraded one."""
    graded.clear_caches()
    fused.clear_caches()
    monkeypatch.setattr(graded, "koszul_sign", lambda a, b: 1)
    yield
    graded.clear_caches()
    fused.clear_caches()
