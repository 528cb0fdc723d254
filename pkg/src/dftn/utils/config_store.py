import configparser
import os
import platform
from pathlib import Path
from typing import Dict, Optional

SETTINGS_FILE_NAME = "settings.ini"


class ConfigStore:
    """User-level settings kept in ``settings.ini`` under the platform config directory"""

    def __init__(self, base_dir: Optional[Path] = None):
        self.base_dir = base_dir or self._get_config_dir()
        self.settings_file = self.base_dir / SETTINGS_FILE_NAME
        self._ensure_config_dir()

    def _get_config_dir(self) -> Path:
        """Get platform-specific config directory"""
        system = platform.system()
        if system == "Windows":
            base_dir = os.environ.get("APPDATA", "")
            return Path(base_dir) / "dftn"
        elif system == "Darwin":  # macOS
            return Path.home() / "Library" / "Application Support" / "dftn"
        else:
            xdg_config = os.environ.get("XDG_CONFIG_HOME", "")
            if xdg_config:
                return Path(xdg_config) / "dftn"
            return Path.home() / ".dftn"

    def _ensure_config_dir(self):
        os.makedirs(self.base_dir, exist_ok=True)

    def _read(self) -> configparser.ConfigParser:
        parser = configparser.ConfigParser()
        if self.settings_file.exists():
            try:
                parser.read(self.settings_file, encoding="utf-8")
            except configparser.Error:
                return configparser.ConfigParser()
        return parser

    def get_settings(self, section: str) -> Dict[str, str]:
        """All keys of one settings section, empty when missing"""
        parser = self._read()
        if not parser.has_section(section):
            return {}
        return dict(parser.items(section))

    def get_setting(self, section: str, key: str, default: Optional[str] = None) -> Optional[str]:
        return self._read().get(section, key, fallback=default)

    def set_setting(self, section: str, key: str, value: str) -> None:
        parser = self._read()
        if not parser.has_section(section):
            parser.add_section(section)
        parser.set(section, key, value)
        with open(self.settings_file, "w", encoding="utf-8") as f:
            parser.write(f)
