import sys
from pathlib import Path

# When pytest runs from the repository root, the bare pyrunner/ project
# directory is picked up as a namespace package that shadows the real
# one. Point imports at the sources and evict the stale module.
_SRC = str(Path(__file__).resolve().parents[1] / "src")
if _SRC not in sys.path:
    sys.path.insert(0, _SRC)
_mod = sys.modules.get("pyrunner")
if _mod is not None and getattr(_mod, "__file__", None) is None:
    del sys.modules["pyrunner"]
