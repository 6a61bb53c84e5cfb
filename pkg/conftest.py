import sys
from pathlib import Path

# Allow running the tests from a fresh checkout without an editable install.
sys.path.insert(0, str(Path(__file__).parent / "src"))
