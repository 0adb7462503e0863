from config.settings import BaseAppSettings
from config.parser import parse_config, serialize_config
from config.dependencies import get_settings, get_run_config
