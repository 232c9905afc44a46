import sys
from pathlib import Path

# Allow `import oracles` (shared reference implementations) from any test
# module regardless of how pytest was invoked.
sys.path.insert(0, str(Path(__file__).resolve().parent))
