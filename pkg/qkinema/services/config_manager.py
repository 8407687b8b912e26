import logging
from typing import Any, Dict

from config.settings import Config

from ..utils.core_utils import ConfigValidator

logger = logging.getLogger(__name__)


class ConfigManager:
    """Centralized configuration management"""

    _instance = None
    _config = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __init__(self):
        if self._config is None:
            self._load_config()

    @classmethod
    def reset(cls):
        """Drop the cached singleton (tests reload settings this way)"""
        cls._instance = None
        cls._config = None

    def _load_config(self):
        """Load and validate all configuration"""
        try:
            ConfigValidator.validate_config_errors(Config.validate_config())
            config = dict(Config.get_tolerances())
            config.update(Config.get_run_defaults())
            config.update({
                "VERSION": Config.VERSION,
                "DEBUG": Config.DEBUG,
                "LOG_LEVEL": Config.LOG_LEVEL,
            })
            type(self)._config = config
            logger.info("✅ Configuration loaded successfully")
        except Exception as e:
            logger.error(f"❌ Configuration error: {e}")
            raise

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value"""
        return self._config.get(key, default)

    def get_tolerances(self) -> Dict[str, float]:
        return {key: self._config[key] for key in Config.get_tolerances()}

    def get_run_defaults(self) -> Dict[str, int]:
        return {key: self._config[key] for key in Config.get_run_defaults()}

    def override(self, **values: Any) -> Dict[str, Any]:
        """Configuration for a single run with some keys replaced; the singleton is untouched"""
        unknown = sorted(set(values) - set(self._config))
        if unknown:
            raise KeyError(f"Unknown configuration keys: {unknown}")
        merged = self._config.copy()
        merged.update({k: v for k, v in values.items() if v is not None})
        return merged
