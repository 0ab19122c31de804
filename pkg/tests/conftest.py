from pathlib import Path

import pytest

from semgrex import parse_file

DATA = Path(__file__).parent / "data"


def load(name: str, mode: str = "basic"):
    return parse_file(str(DATA / name), mode)


def sentence(name: str, mode: str = "basic", index: int = 0):
    return load(name, mode).sentences[index]


@pytest.fixture
def jen():
    return sentence("jen.conllu")


@pytest.fixture
def guerrillas():
    return sentence("guerrillas.conllu")


@pytest.fixture
def paul_basic():
    return sentence("paul.conllu")


@pytest.fixture
def paul_enhanced():
    return sentence("paul.conllu", mode="enhanced")


@pytest.fixture
def hamburger():
    return sentence("hamburger.conllu")


@pytest.fixture
def family():
    return load("family.conllu")
