import numpy as np
import pytest

from trinecap.qstate import trine_states

ACCEPTANCE_LINES = []


def record(criterion: int, passed: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {criterion}: {detail}")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("criterion ")[1].split(":")[0])):
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def trine():
    return trine_states()


@pytest.fixture(scope="session")
def c1_result(trine):
    from trinecap.measure import optimize_c1

    return optimize_c1(trine)


def real_mi(priors, w):
    """Mutual information in bits, written out directly."""
    q = priors @ w
    total = 0.0
    for x, px in enumerate(priors):
        for y, qy in enumerate(q):
            if px > 0 and w[x, y] > 0:
                total += px * w[x, y] * np.log2(w[x, y] / qy)
    return total
