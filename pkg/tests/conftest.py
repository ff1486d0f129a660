import pathlib
import sys

try:
    import cmvkit  # noqa: F401
except ImportError:  # run from a source checkout without installing
    sys.path.insert(0, str(pathlib.Path(__file__).resolve().parent.parent / "src"))
