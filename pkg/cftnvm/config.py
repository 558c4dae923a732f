"""
Configuration parsing and management for cftnvm
Settings come from defaults, an optional YAML/TOML/JSON file and environment overrides
"""

import json
import logging
import os
from contextlib import contextmanager
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Any, Callable, Dict, Iterator, List, Optional

from .errors import ConfigError

# Try to import optional dependencies
try:
    import tomllib
    HAS_TOML = True
except ImportError:
    HAS_TOML = False

try:
    import yaml
    HAS_YAML = True
except ImportError:
    HAS_YAML = False

logger = logging.getLogger(__name__)

ENV_MAX_ORDER = "CFT_NVM_MAX_ORDER"
ENV_WORKERS = "CFT_NVM_WORKERS"


@dataclass(frozen=True)
class Settings:
    """Caps and knobs shared by every module"""
    max_order: int = 20000
    field_cap: int = 2 ** 16
    minor_cap: int = 12
    chebotarev_cap: int = 13
    scan_q_max: int = 256
    workers: int = 1
    approx_digits: int = 15

    def __post_init__(self):
        for item in fields(self):
            value = getattr(self, item.name)
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigError(f"Setting '{item.name}' must be an integer, got {value!r}")
            if value < 1:
                raise ConfigError(f"Setting '{item.name}' must be positive, got {value}")

    def to_dict(self) -> Dict[str, int]:
        return {item.name: getattr(self, item.name) for item in fields(self)}


class SettingsParser:
    """Settings parser supporting multiple formats"""

    def __init__(self):
        self.supported_formats: Dict[str, Callable[[Path], Dict[str, Any]]] = {
            '.json': self._parse_json
        }

        if HAS_YAML:
            self.supported_formats['.yaml'] = self._parse_yaml
            self.supported_formats['.yml'] = self._parse_yaml

        if HAS_TOML:
            self.supported_formats['.toml'] = self._parse_toml

    def parse_file(self, config_path: Path) -> Settings:
        """Parse a settings file based on its extension"""
        if not config_path.exists():
            raise ConfigError(f"Configuration file not found: {config_path}")

        suffix = config_path.suffix.lower()
        parser = self.supported_formats.get(suffix)

        if not parser:
            raise ConfigError(f"Unsupported config format: {suffix}")

        try:
            data = parser(config_path)
        except ConfigError:
            raise
        except Exception as e:
            raise ConfigError(f"Error parsing {config_path}: {e}") from e
        return self.dict_to_settings(data)

    def _parse_yaml(self, path: Path) -> Dict[str, Any]:
        with open(path, 'r', encoding='utf-8') as f:
            return yaml.safe_load(f) or {}

    def _parse_toml(self, path: Path) -> Dict[str, Any]:
        with open(path, 'rb') as f:
            return tomllib.load(f)

    def _parse_json(self, path: Path) -> Dict[str, Any]:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)

    def dict_to_settings(self, data: Dict[str, Any], base: Optional[Settings] = None) -> Settings:
        """Convert a dictionary to Settings, honouring a nested 'cftnvm' section"""
        if not isinstance(data, dict):
            raise ConfigError("Configuration root must be a mapping")
        section = data.get('cftnvm', data)
        if not isinstance(section, dict):
            raise ConfigError("'cftnvm' section must be a mapping")

        known = {item.name for item in fields(Settings)}
        unknown = sorted(set(section) - known)
        if unknown:
            raise ConfigError(f"Unknown settings: {', '.join(unknown)}")

        return replace(base or Settings(), **section)


class SettingsDetector:
    """Locate the settings file for the current run"""

    def __init__(self):
        self.parser = SettingsParser()
        self.config_files = [
            'cftnvm.yaml',
            'cftnvm.yml',
            'cftnvm.toml',
            'cftnvm.json',
            '.cftnvm.yaml',
            '.cftnvm.yml',
            '.cftnvm.toml',
            '.cftnvm.json'
        ]
        self.user_config = Path.home() / ".config" / "cftnvm" / "config.yaml"

    def candidates(self, project_path: Optional[Path] = None) -> List[Path]:
        if project_path is None:
            project_path = Path.cwd()
        paths = [project_path / name for name in self.config_files]
        paths.append(self.user_config)
        return paths

    def detect_config(self, project_path: Optional[Path] = None) -> Optional[Path]:
        for path in self.candidates(project_path):
            if path.exists() and path.suffix.lower() in self.parser.supported_formats:
                return path
        return None


def apply_environment(settings: Settings, environ: Optional[Dict[str, str]] = None) -> Settings:
    """Apply CFT_NVM_* environment overrides"""
    environ = os.environ if environ is None else environ
    changes: Dict[str, int] = {}
    for var, key in ((ENV_MAX_ORDER, 'max_order'), (ENV_WORKERS, 'workers')):
        raw = environ.get(var)
        if raw is None or raw.strip() == "":
            continue
        try:
            changes[key] = int(raw)
        except ValueError:
            raise ConfigError(f"{var} must be an integer, got {raw!r}")
    return replace(settings, **changes) if changes else settings


def load_settings(config_path: Optional[Path] = None,
                  environ: Optional[Dict[str, str]] = None) -> Settings:
    """Load settings from an explicit file, a discovered file, or defaults"""
    detector = SettingsDetector()
    path = config_path or detector.detect_config()
    if path is None:
        settings = Settings()
    else:
        settings = detector.parser.parse_file(path)
        logger.debug(f"Loaded settings from {path}")
    return apply_environment(settings, environ)


# Global settings instance
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    """Get global settings instance"""
    global _settings
    if _settings is None:
        _settings = load_settings()
    return _settings


def set_settings(settings: Optional[Settings]) -> None:
    """Replace the global settings; None forces a reload on next access"""
    global _settings
    _settings = settings


@contextmanager
def override_settings(**changes: int) -> Iterator[Settings]:
    """Temporarily replace selected settings"""
    global _settings
    previous = _settings
    _settings = replace(get_settings(), **changes)
    try:
        yield _settings
    finally:
        _settings = previous
