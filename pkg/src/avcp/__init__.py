"""Quantum models of classical measurement arrangements and the operator rules they imply."""
from importlib.metadata import PackageNotFoundError, version

try:
    __version__ = version("avcp")
except PackageNotFoundError:  # running from a source tree
    __version__ = "0.1.0"

from .opcore import HermitianOperator, StateVector  # noqa: E402

__all__ = ["HermitianOperator", "StateVector", "__version__"]
