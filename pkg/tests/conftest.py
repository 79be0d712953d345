import numpy as np
import pytest

from cstlz import index_from_bytes

RUNNING = b"aaababaaabaaba"
FIG1_BP = "(()(()((()())(()()()))(()(()())()))(()(()())()))"
FIG1_PSI = [4, 1, 6, 7, 8, 10, 11, 12, 13, 14, 15, 2, 3, 5, 9]
FIG1_SA = [15, 14, 7, 1, 11, 8, 2, 12, 5, 9, 3, 13, 6, 10, 4]
# "()" starts in the leaves row of the running example's tree
FIG1_LEAVES = "010010001010001010100001010001010100001010001010"


def random_text(rng, n, sigma):
    alph = np.arange(1, 256) if sigma >= 255 else np.arange(97, 97 + sigma)
    return rng.choice(alph, n).astype(np.uint8).tobytes()


@pytest.fixture(scope="session")
def running():
    return index_from_bytes(RUNNING)[1]


ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
