import logging

# Marks handlers installed by init_logging_config so re-initialising replaces
# them instead of stacking duplicates on the root logger.
_SETREACH_HANDLER = "_setreach_handler"


def get_handlers(
    filename=None, mode="w", file_level=logging.DEBUG, stderr_level=logging.INFO
):
    """
    Build the stderr handler and, when a filename is given, a file handler.

    Args:
      filename: Path of the log file. ``None`` disables file logging, which is the
    default for library use and for the test-suite.
      mode: File open mode for the file handler. Defaults to ``"w"``.
      file_level: Level of the file handler. Defaults to DEBUG so per-cell details
    end up in the file.
      stderr_level: Level of the stderr handler. Defaults to INFO.

    Returns:
      A list with the stderr handler first and the optional file handler second.
    """
    stderr_handler = logging.StreamHandler()
    stderr_handler.setLevel(stderr_level)
    stderr_handler.setFormatter(CustomFormatter())
    handlers = [stderr_handler]

    if filename:
        file_handler = logging.FileHandler(filename, mode=mode)
        file_handler.setLevel(file_level)
        file_handler.setFormatter(CustomFormatter(True))
        handlers.append(file_handler)

    for handler in handlers:
        setattr(handler, _SETREACH_HANDLER, True)
    return handlers


class CustomFormatter(logging.Formatter):
    """
    A log formatter that colours messages by level on terminals and stays plain in files.

    Args:
        file (bool): True when the formatter writes to a file (no ANSI colours).
    """

    def __init__(self, file=False):
        super().__init__()
        yellow = "\x1b[36;10m" if not file else ""
        blue = "\x1b[35;10m" if not file else ""
        green = "\x1b[32;10m" if not file else ""
        red = "\x1b[31;10m" if not file else ""
        bold_red = "\x1b[31;1m" if not file else ""
        reset = "\x1b[0m" if not file else ""
        log = "%(asctime)s (%(name)s:%(lineno)d) - %(levelname)s: "
        msg = reset + "%(message)s"

        self.FORMATS = {
            logging.DEBUG: blue + log + msg,
            logging.INFO: green + log + msg,
            logging.WARNING: yellow + log + msg,
            logging.ERROR: red + log + msg,
            logging.CRITICAL: bold_red + log + msg,
        }

    def format(self, record):
        log_fmt = self.FORMATS.get(record.levelno)
        formatter = logging.Formatter(log_fmt)
        return formatter.format(record)


def init_logging_config(
    basic_log_level=logging.INFO,
    filename=None,
    mode="w",
    file_level=logging.DEBUG,
    stderr_level=None,
):
    """
    Configure the root logger for a setreach run.

    Args:
      basic_log_level: Level of the root logger. Accepts an int or a level name
    such as ``"DEBUG"``.
      filename: Optional log file; ``None`` logs to stderr only.
      mode: File open mode for the log file.
      file_level: Level of the file handler.
      stderr_level: Level of the stderr handler; defaults to ``basic_log_level``.
    """
    if isinstance(basic_log_level, str):
        basic_log_level = logging.getLevelName(basic_log_level.upper())
    if stderr_level is None:
        stderr_level = basic_log_level

    logger = logging.getLogger()
    logger.setLevel(basic_log_level)

    for handler in list(logger.handlers):
        if getattr(handler, _SETREACH_HANDLER, False):
            logger.removeHandler(handler)
            handler.close()

    for handler in get_handlers(
        filename=filename, mode=mode, file_level=file_level, stderr_level=stderr_level
    ):
        logger.addHandler(handler)
