import json
import threading

import pytest

from charp_closure.src.config import (
    BUDGET_ENV_VAR,
    ConfigManager,
    EngineConfig,
    ResourceBudget,
    current_budget,
    parse_budget,
    use_budget,
)
from charp_closure.src.errors import ConfigError


def test_defaults():
    config = EngineConfig()
    assert config.emax == 4
    assert config.window == 2
    assert config.order == "grevlex"
    assert config.budget == ResourceBudget(5000, 200)


@pytest.mark.parametrize(
    "text, expected",
    [
        ("max_basis_size=100,max_degree=20", {"max_basis_size": 100, "max_degree": 20}),
        ("basis=7", {"max_basis_size": 7}),
        (" degree = 12 ,", {"max_degree": 12}),
        ("", {}),
    ],
)
def test_parse_budget(text, expected):
    assert parse_budget(text) == expected


@pytest.mark.parametrize("text", ["max_degree", "size=3", "max_degree=abc", "max_degree=0", "basis=-2"])
def test_parse_budget_rejects(text):
    with pytest.raises(ConfigError):
        parse_budget(text)


def test_missing_file_gives_defaults(tmp_path):
    manager = ConfigManager(str(tmp_path / "missing.json"))
    assert manager.get_config() == EngineConfig()


def test_load_ignores_unknown_keys(tmp_path):
    path = tmp_path / "charp_config.json"
    path.write_text(json.dumps({"emax": 6, "window": 3, "color": "blue"}))
    config = ConfigManager(str(path)).get_config()
    assert config.emax == 6
    assert config.window == 3
    assert config.max_degree == 200


def test_corrupt_file_falls_back_to_defaults(tmp_path, caplog):
    path = tmp_path / "charp_config.json"
    path.write_text("{not json")
    manager = ConfigManager(str(path))
    assert manager.get_config() == EngineConfig()
    assert "[CONFIG]" in caplog.text


def test_save_then_load(tmp_path):
    path = tmp_path / "charp_config.json"
    manager = ConfigManager(str(path))
    manager.update_config(emax=2, order="lex")
    manager.save_config()
    assert json.loads(path.read_text())["order"] == "lex"
    assert ConfigManager(str(path)).get_config().emax == 2


def test_update_rejects_unknown_keys(tmp_path):
    manager = ConfigManager(str(tmp_path / "c.json"))
    with pytest.raises(ConfigError, match="colour"):
        manager.update_config(colour="red")


def test_environment_overrides_file(tmp_path, monkeypatch):
    path = tmp_path / "charp_config.json"
    path.write_text(json.dumps({"max_degree": 50}))
    monkeypatch.setenv(BUDGET_ENV_VAR, "degree=30,basis=400")
    manager = ConfigManager(str(path))
    manager.apply_environment()
    assert manager.get_config().budget == ResourceBudget(400, 30)


def test_environment_absent_leaves_config(tmp_path, monkeypatch):
    monkeypatch.delenv(BUDGET_ENV_VAR, raising=False)
    manager = ConfigManager(str(tmp_path / "c.json"))
    manager.apply_environment()
    assert manager.get_config() == EngineConfig()


def test_use_budget_restores_previous():
    before = current_budget()
    with use_budget(ResourceBudget(10, 5)) as budget:
        assert current_budget() is budget
        with use_budget(ResourceBudget(3, 3)):
            assert current_budget().max_degree == 3
        assert current_budget() is budget
    assert current_budget() == before


def test_budgets_are_isolated_between_threads():
    inside = threading.Event()
    release = threading.Event()
    seen = {}

    def worker():
        seen["initial"] = current_budget()
        with use_budget(ResourceBudget(7, 7)):
            inside.set()
            release.wait(5)
            seen["own"] = current_budget()

    with use_budget(ResourceBudget(10, 5)) as budget:
        thread = threading.Thread(target=worker)
        thread.start()
        assert inside.wait(5)
        assert current_budget() is budget
        release.set()
        thread.join(5)
    assert seen["initial"] == ResourceBudget()
    assert seen["own"] == ResourceBudget(7, 7)
