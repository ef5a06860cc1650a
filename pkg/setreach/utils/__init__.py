from .logger import init_logging_config
from .ReadFiles import read_config, read_doc, write_doc
from .settings import DEFAULT_CONFIG_PATH, PlotColors, Settings, load_settings
