from pathlib import Path

import pytest

from msdtools.corpus import load_corpus
from msdtools.spec_model import load_spec_file

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data():
    return DATA


@pytest.fixture(scope="session")
def spec():
    return load_spec_file(DATA / "mini.tab")


@pytest.fixture()
def fragment():
    return load_corpus((DATA / "osl-fragment.xml").read_bytes())
