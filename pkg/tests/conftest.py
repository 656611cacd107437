import json
import sys
from functools import lru_cache
from importlib import resources
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], print_blob=True)
settings.load_profile("default")

# acceptance verdicts collected during the run, printed in the terminal summary
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def load_bundled(name: str) -> dict:
    text = resources.files("newtonsing").joinpath(f"data/{name}").read_text(encoding="utf-8")
    return json.loads(text)


@pytest.fixture(scope="session")
def classification_corpus():
    return load_bundled("classification_corpus.json")["entries"]


# phase text and extra seeded directions for the worst-case scans
DECAY_PHASES = {
    "E6": ("x2^3 + x1^4", [(0, -3)]),
    "E7": ("x2^3 + x1^3*x2", []),
    "E8": ("x2^3 + x1^5", [(0, -3)]),
    "D4minus": ("x1*x2^2 - x1^3", []),
    "D-adapted": ("x1*x2^2 + x1^6", []),
    "D-adapted-5": ("x1*x2^2 + x1^5", []),
}


@lru_cache(maxsize=None)
def worst_case(name: str):
    """Worst-case decay scan over the full direction grid, shared between test modules."""
    from newtonsing.cli import parse_polynomial
    from newtonsing.oscint import AnnulusAmplitude, s_grid, worst_case_decay

    text, seeds = DECAY_PHASES[name]
    return worst_case_decay(parse_polynomial(text), AnnulusAmplitude(0.5, 2.0), s_grid(41, 4.0), seeds=seeds)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
