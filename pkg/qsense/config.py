from pathlib import Path
from collections.abc import MutableMapping
import logging

import yaml

logger = logging.getLogger("config")

DEFAULT_CONFIG_FILE = Path(__file__).resolve().parent.parent / "config.yaml"


class Config(MutableMapping):
    """
    Config that behaves exactly like a (read-only) dictionary, but that can be re-read from file if necessary,
    or pointed at another file (--config on the command line)
    """
    config = None

    def __init__(self, config_file):
        self.config_file = Path(config_file)
        self.reload()

    def __getitem__(self, key):
        value = self.config[key]
        return value

    def reload(self, config_file=None):
        if config_file is not None:
            self.config_file = Path(config_file)
        logger.debug("Loading config from {}".format(self.config_file))
        self.config = yaml.safe_load(self.config_file.read_text())

    def __setitem__(self, key, value):
        raise NotImplementedError()

    def __delitem__(self, key):
        raise NotImplementedError()

    def __iter__(self):
        return iter(self.config)

    def __len__(self):
        return len(self.config)


CONFIG = Config(DEFAULT_CONFIG_FILE)
