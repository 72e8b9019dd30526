from fractions import Fraction

import pytest

from tugame import config
from tugame.catalog import EXAMPLE_NUCLEOLUS, example_game, replication_game
from tugame.game import TuGame, coalition_from_members

F = Fraction


def mask(*members, n=4):
    return coalition_from_members(members, n)


@pytest.fixture
def game():
    return example_game()


@pytest.fixture
def nu():
    return EXAMPLE_NUCLEOLUS


@pytest.fixture
def v1():
    return replication_game("v1")


@pytest.fixture
def v2():
    return replication_game("v2")


@pytest.fixture
def symmetric2():
    return TuGame(2, [0, 0, 0, 10])


@pytest.fixture(autouse=True)
def isolated_config(tmp_path, monkeypatch):
    """Point the config file into tmp_path and drop any player-cap override."""
    monkeypatch.setattr(config, "CONFIG_FILE", str(tmp_path / "config" / "config.json"))
    monkeypatch.delenv(config.MAX_N_ENV, raising=False)


@pytest.fixture
def example_file(tmp_path):
    path = tmp_path / "example.game"
    path.write_text(
        "# sample\n"
        "players 4\n"
        "1,2 3\n"
        "2,3 3\n"
        "2,3,4 3\n"
        "1,2,3 6\n"
        "1,2,4 6\n"
        "m:15 10\n",
        encoding="utf-8",
    )
    return str(path)
