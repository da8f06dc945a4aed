import pytest

from markovstego.corpus import PreprocessConfig, read_sentences
from markovstego.markov import ModelConfig, train
from markovstego.synthetic import desk_corpus

import oracles

DESK_SENTENCES = 60_000
DESK_ORDER = 2


def toy_model(lines, order=1, min_count=1, keyword_count=100):
    config = ModelConfig(order, PreprocessConfig(min_count, keyword_count, 128))
    return train(read_sentences("\n".join(lines).encode(), config.preprocess), config)


def uniform_model(k):
    config = ModelConfig(1, PreprocessConfig(1, 100, 128))
    return train(oracles.uniform_corpus(k), config)


@pytest.fixture
def stego_toy():
    return toy_model(["i am fine", "i am ok", "i was fine", "i was ok"])


@pytest.fixture(scope="session")
def desk_lines():
    return desk_corpus(DESK_SENTENCES, seed=0)


@pytest.fixture(scope="session")
def desk_model(desk_lines):
    config = ModelConfig(DESK_ORDER, PreprocessConfig())
    return train(read_sentences("\n".join(desk_lines).encode(), config.preprocess), config)


@pytest.fixture(scope="session")
def small_desk_model():
    config = ModelConfig(2, PreprocessConfig(min_count=3))
    return train(read_sentences("\n".join(desk_corpus(3000, seed=1)).encode(), config.preprocess), config)


ACCEPTANCE_RESULTS = []


@pytest.fixture
def criterion():
    """Record one acceptance criterion's verdict, then assert it."""

    def record(name, ok, detail=""):
        ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
        print(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
        assert ok, f"{name}: {detail}"

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
