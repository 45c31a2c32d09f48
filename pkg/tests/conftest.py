import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


def oracle_int(weights):
    """Independent float Int from exp(2 pi i w), no cyclotomic arithmetic."""
    a = [cmath.exp(2j * math.pi * float(w)) for w in weights]
    n = len(weights) - 2
    m = np.zeros((n, n), dtype=complex)
    for i in range(n):
        m[i, i] = 1 / (1 - a[i]) - 1 + 1 / (1 - a[i + 1])
        if i + 1 < n:
            m[i, i + 1] = -1 / (1 - a[i + 1])
            m[i + 1, i] = 1 / (1 - a[i + 1].conjugate())
    return m


def oracle_signature(weights, tol=1e-9):
    ev = np.linalg.eigvalsh(1j * oracle_int(weights))
    return int((ev > tol).sum()), int((ev < -tol).sum())


@pytest.fixture
def rng():
    return random.Random(20261015)


CRITERIA = {}


def record(num, ok, note=""):
    CRITERIA[num] = (ok, note)
    print(f"criterion {num}: {'PASS' if ok else 'FAIL'}{' - ' + note if note else ''}")


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        ok, note = CRITERIA[num]
        terminalreporter.write_line(f"criterion {num:>2}: {'PASS' if ok else 'FAIL'}{'  (' + note + ')' if note else ''}")


__all__ = ["oracle_int", "oracle_signature", "record", "Fraction"]
