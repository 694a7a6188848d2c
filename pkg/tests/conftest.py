import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent))

import pytest

from foldnet import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # JIT compilation happens once here instead of skewing the first timed test
    kernels.warmup()
