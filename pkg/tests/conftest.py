import pytest

from schenql.corpus import load_corpus

from support import FIXTURE


@pytest.fixture(scope="session")
def corpus():
    return load_corpus(FIXTURE)
