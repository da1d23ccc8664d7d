"""Command-line front end."""

from .config import ConfigError, RunConfig, config_from, load_config_file, resolve_system
from .main import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, build_parser, main
