from pathlib import Path

import pytest

from alignkit import parse_bitext, parse_conll, parse_pharaoh

DATA_DIR = Path(__file__).parent / "data" / "toy"


@pytest.fixture(scope="session")
def toy_paths():
    return {
        "bitext": DATA_DIR / "toy.bitext",
        "gold": DATA_DIR / "toy.gold",
        "conll": DATA_DIR / "toy.src.conll",
    }


@pytest.fixture(scope="session")
def toy_corpus(toy_paths):
    return parse_bitext(toy_paths["bitext"].read_text(encoding="utf-8"))


@pytest.fixture(scope="session")
def toy_gold(toy_paths, toy_corpus):
    return parse_pharaoh(toy_paths["gold"].read_text(encoding="utf-8"), corpus=toy_corpus)


@pytest.fixture(scope="session")
def toy_tags(toy_paths):
    return parse_conll(toy_paths["conll"].read_text(encoding="utf-8"), task="pos")
