import gc
import random
from dataclasses import dataclass

import pytest

from chancelogic.modelgen import GenParams, generate_model, sample_formula
from chancelogic.semantics import Evaluator

CORPUS_SEEDS = range(1000)
CORPUS_DEPTHS = (0, 1, 2)


@dataclass
class Sample:
    seed: int
    params: GenParams
    model: object
    formulas: list
    ev: Evaluator


def make_sample(seed, max_worlds=6, max_times=4, depths=CORPUS_DEPTHS):
    p = GenParams(max_worlds=max_worlds, max_times=max_times, seed=seed)
    m = generate_model(p)
    rng = random.Random(seed)
    return Sample(seed, p, m, [sample_formula(p, m, d, rng) for d in depths], Evaluator(m))


@pytest.fixture(scope="session")
def corpus():
    """Seeds 0..999, at most 6 worlds and 4 times, three sampled formulas each."""
    return [make_sample(s) for s in CORPUS_SEEDS]


def pytest_configure(config):
    # the session corpus keeps ~1000 memo tables alive; full collections over them dominate otherwise
    gc.set_threshold(50_000, 50, 100)
    config.addinivalue_line("markers", "criterion(n, title): acceptance criterion number and title")
    config._criteria = {}


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None or call.when not in ("setup", "call"):
        return
    n, title = mark.args
    failed = call.excinfo is not None and not call.excinfo.errisinstance(pytest.skip.Exception)
    prev = item.config._criteria.get(n, (title, True))
    item.config._criteria[n] = (title, prev[1] and not failed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    crit = config._criteria
    if not crit:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(crit):
        title, ok = crit[n]
        terminalreporter.write_line(f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {title}")
