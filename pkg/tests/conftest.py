from pathlib import Path

import numpy as np
import pytest

DATA = Path(__file__).parent / "data"
CANTERBURY = DATA / "canterbury"

ACCEPTANCE_LINES: list[str] = []


def adversarial_inputs() -> dict[str, bytes]:
    rng = np.random.default_rng(1234)
    return {
        "same_byte": b"\x00" * 65536,
        "random": rng.integers(0, 256, 65536, dtype=np.uint8).tobytes(),
        "periodic": (b"abcabcabd" * 8000)[:65536],
        "period_256": bytes(range(256)) * 200,
        "short": b"shorter than the dictionary",
        "one_byte": b"x",
        "empty": b"",
    }


@pytest.fixture(scope="session")
def corpus() -> dict[str, bytes]:
    files = {p.name: p.read_bytes() for p in sorted(CANTERBURY.iterdir()) if p.suffix == ".txt"}
    return files


@pytest.fixture(scope="session")
def adversarial() -> dict[str, bytes]:
    return adversarial_inputs()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
