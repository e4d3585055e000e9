import json
import logging
import os
from collections.abc import Iterator
from contextlib import contextmanager
from contextvars import ContextVar
from typing import NamedTuple

from .errors import ConfigError

logger = logging.getLogger(__name__)

BUDGET_ENV_VAR = "CHARP_RESOURCE_BUDGET"


class ResourceBudget(NamedTuple):
    max_basis_size: int = 5000
    max_degree: int = 200


class EngineConfig(NamedTuple):
    max_basis_size: int = 5000
    max_degree: int = 200
    emax: int = 4
    window: int = 2
    order: str = "grevlex"
    seed: int = 0
    probe_degree: int = 2

    @property
    def budget(self) -> ResourceBudget:
        return ResourceBudget(self.max_basis_size, self.max_degree)


_BUDGET_ALIASES = {
    "max_basis_size": "max_basis_size",
    "basis": "max_basis_size",
    "max_degree": "max_degree",
    "degree": "max_degree",
}


def parse_budget(text: str) -> dict[str, int]:
    """Parse `max_basis_size=5000,max_degree=200` (aliases `basis`, `degree`)"""
    changes: dict[str, int] = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        key, sep, value = part.partition("=")
        key = key.strip()
        if not sep or key not in _BUDGET_ALIASES:
            raise ConfigError(f"Invalid {BUDGET_ENV_VAR} entry: {part!r}")
        try:
            number = int(value)
        except ValueError:
            raise ConfigError(f"Invalid {BUDGET_ENV_VAR} value: {part!r}") from None
        if number <= 0:
            raise ConfigError(f"{BUDGET_ENV_VAR} values must be positive: {part!r}")
        changes[_BUDGET_ALIASES[key]] = number
    return changes


class ConfigManager:
    def __init__(self, config_file: str = "charp_config.json") -> None:
        self.config_file: str = config_file
        self.config: EngineConfig = EngineConfig()
        self.load_config()

    def load_config(self) -> None:
        """Load engine configuration from JSON file"""
        if os.path.exists(self.config_file):
            try:
                with open(self.config_file) as f:
                    data = json.load(f)
                    self.config = EngineConfig(
                        **{k: v for k, v in data.items() if k in EngineConfig._fields}
                    )
            except Exception as e:
                logger.error(f"[CONFIG] Error loading {self.config_file}: {e}")
                self.config = EngineConfig()
        else:
            self.config = EngineConfig()

    def apply_environment(self) -> None:
        """Overlay CHARP_RESOURCE_BUDGET on the loaded configuration"""
        text = os.environ.get(BUDGET_ENV_VAR)
        if text:
            self.config = self.config._replace(**parse_budget(text))

    def save_config(self) -> None:
        """Save engine configuration to JSON file"""
        try:
            with open(self.config_file, "w") as f:
                json.dump(self.config._asdict(), f, indent=2)
        except Exception as e:
            logger.error(f"[CONFIG] Error saving {self.config_file}: {e}")

    def get_config(self) -> EngineConfig:
        return self.config

    def update_config(self, **changes) -> EngineConfig:
        """Update configuration fields, rejecting unknown keys"""
        unknown = set(changes) - set(EngineConfig._fields)
        if unknown:
            raise ConfigError(f"Unknown configuration keys: {', '.join(sorted(unknown))}")
        self.config = self.config._replace(**changes)
        return self.config


_active_budget: ContextVar[ResourceBudget] = ContextVar("charp_resource_budget", default=ResourceBudget())


def current_budget() -> ResourceBudget:
    return _active_budget.get()


@contextmanager
def use_budget(budget: ResourceBudget) -> Iterator[ResourceBudget]:
    """Install a resource budget for the current thread or task"""
    token = _active_budget.set(budget)
    try:
        yield budget
    finally:
        _active_budget.reset(token)
