import logging
import sys

from qsense.config import CONFIG
from qsense.cli import main

config = CONFIG["logging"]
logging.basicConfig(level=config["level"], format=config["format"], datefmt=config["datefmt"])
sys.exit(main())
