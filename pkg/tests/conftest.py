import functools

import pytest

from incremental_pl import make_domain_pair, profile, soft_predictions, train_source

DESK_SEEDS = (0, 1, 2, 3, 4)


@functools.lru_cache(maxsize=None)
def desk_task(seed: int):
    """Default desk task for one seed: (pair, source model, exported predictions)."""
    pair = make_domain_pair(seed=seed)
    hp = profile("office", seed=seed)
    model = train_source(pair.source, pair.K, hp)
    return pair, model, soft_predictions(model, pair.target.features)


@pytest.fixture
def desk0():
    return desk_task(0)


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.VERDICTS:
        terminalreporter.write_line(line)
