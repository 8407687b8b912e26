import json
import logging
import os
import sys
from datetime import datetime
from functools import wraps
from typing import Any, Dict, List

import click

from ..core.errors import ConsistencyError, QkinemaError, ValidationError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2


class JSONManager:
    """Centralized JSON file operations"""

    @staticmethod
    def ensure_directory(file_path: str):
        """Ensure directory exists for file path"""
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

    @staticmethod
    def dumps(data: Dict[Any, Any]) -> str:
        return json.dumps(data, ensure_ascii=False, indent=2, default=str)

    @staticmethod
    def save_json(data: Dict[Any, Any], file_path: str) -> bool:
        """Safe JSON save with backup"""
        try:
            JSONManager.ensure_directory(file_path)

            # Keep the previous report as a backup
            if os.path.exists(file_path):
                backup_path = f"{file_path}.backup"
                os.replace(file_path, backup_path)

            with open(file_path, "w", encoding="utf-8") as f:
                f.write(JSONManager.dumps(data))

            return True
        except OSError as e:
            logger.error(f"Error saving JSON {file_path}: {e}")
            return False


class ErrorHandler:
    """Centralized error handling patterns"""

    @staticmethod
    def error_report(command: str, error: Exception) -> Dict[str, Any]:
        return {
            "command": command,
            "error": str(error),
            "type": type(error).__name__,
            "timestamp": datetime.now().isoformat(),
        }

    @staticmethod
    def cli_error_handler(command: str):
        """
        Decorator factory for CLI commands.

        ValidationError → JSON error report, exit 1.
        ConsistencyError → JSON error report, exit 2.
        """

        def decorator(func):
            @wraps(func)
            def wrapper(*args, **kwargs):
                try:
                    return func(*args, **kwargs)
                except ValidationError as e:
                    logger.error(f"Validation error in {command}: {e}")
                    click.echo(JSONManager.dumps(ErrorHandler.error_report(command, e)))
                    sys.exit(EXIT_USAGE)
                except ConsistencyError as e:
                    logger.error(f"Consistency violation in {command}: {e}")
                    click.echo(JSONManager.dumps(ErrorHandler.error_report(command, e)))
                    sys.exit(EXIT_VIOLATION)
                except QkinemaError as e:
                    logger.error(f"Error in {command}: {e}")
                    click.echo(JSONManager.dumps(ErrorHandler.error_report(command, e)))
                    sys.exit(EXIT_USAGE)

            return wrapper

        return decorator


class ConfigValidator:
    """Configuration validation utilities"""

    @staticmethod
    def validate_config_errors(errors: List[str]) -> None:
        """Raise when the configuration reported any error"""
        if errors:
            raise ValidationError(f"Invalid configuration: {errors}")
