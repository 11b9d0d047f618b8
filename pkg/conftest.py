import sys
from pathlib import Path

# run the tests against the source tree
sys.path.insert(0, str(Path(__file__).resolve().parent))
