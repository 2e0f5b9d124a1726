"""
Configuration loader with secret placeholder resolution.
Loads a JSON config and resolves {{env:...}} and {{kv/data/...}} placeholders.
"""

import copy
import json
import os
from typing import Any, Optional

from src.vault.vault_client import resolve_config_secrets

DEFAULT_CONFIG_PATH = "./config/config.json"


class ConfigLoader:
    """
    Singleton configuration loader.
    Keeps both the raw document (placeholders intact) and the resolved one.
    """

    _instance = None
    _config: Optional[dict] = None
    _raw: Optional[dict] = None
    _path: Optional[str] = None

    def __new__(cls, config_path: Optional[str] = None):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self, config_path: Optional[str] = None):
        if config_path is not None and config_path != self._path:
            self._load_config(config_path)
        elif self._config is None:
            self._load_config(os.getenv("CONFIG_PATH", DEFAULT_CONFIG_PATH))

    @classmethod
    def reset(cls):
        """Drop the singleton (tests and fresh CLI invocations)."""
        cls._instance = None
        cls._config = None
        cls._raw = None
        cls._path = None

    @classmethod
    def from_dict(cls, document: dict) -> "ConfigLoader":
        """Install an in-memory document as the active configuration."""
        cls.reset()
        instance = super().__new__(cls)
        instance._raw = copy.deepcopy(document)
        instance._config = resolve_config_secrets(copy.deepcopy(document))
        instance._path = "<memory>"
        cls._instance = instance
        return instance

    def _load_config(self, config_path: str):
        """Load and resolve configuration."""
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                raw_config = json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"Configuration file not found: {config_path}")
        except json.JSONDecodeError as e:
            raise ValueError(f"Invalid JSON in configuration file {config_path}: {e}")

        self._raw = copy.deepcopy(raw_config)
        self._config = resolve_config_secrets(raw_config)
        self._path = config_path

    def get(self, key: str, default: Any = None) -> Any:
        """
        Get configuration value by key.

        Args:
            key: Top-level configuration key
            default: Default value if key not found

        Returns:
            Configuration value or default
        """
        if self._config is None:
            return default
        return self._config.get(key, default)

    def get_nested(self, *keys: str, default: Any = None) -> Any:
        """
        Get nested configuration value.

        Args:
            *keys: Path of keys to traverse
            default: Default value if path not found

        Returns:
            Configuration value or default
        """
        value = self._config
        for key in keys:
            if isinstance(value, dict):
                value = value.get(key)
                if value is None:
                    return default
            else:
                return default
        return value

    def reload(self):
        """Reload configuration from file."""
        path = self._path
        self._config = None
        self._load_config(path or os.getenv("CONFIG_PATH", DEFAULT_CONFIG_PATH))

    @property
    def path(self) -> Optional[str]:
        return self._path

    @property
    def raw_config(self) -> dict:
        """The configuration as written, placeholders unresolved."""
        return copy.deepcopy(self._raw or {})

    @property
    def resolved_config(self) -> dict:
        """Get the full resolved configuration."""
        return self._config or {}
