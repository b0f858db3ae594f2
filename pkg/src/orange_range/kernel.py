"""Select the simulation kernel backend at import.

The compiled extension is used when it was built; setting
``ORANGE_PURE_PYTHON=1`` forces the pure-Python implementation.
"""
import os

from . import _simkernel_py

python_integrate = _simkernel_py.integrate

try:
    from ._simkernel import integrate as compiled_integrate
except ImportError:  # extension not built
    compiled_integrate = None

if compiled_integrate is not None and not os.environ.get("ORANGE_PURE_PYTHON"):
    integrate = compiled_integrate
    BACKEND = "compiled"
else:
    integrate = python_integrate
    BACKEND = "python"

__all__ = ["integrate", "python_integrate", "compiled_integrate", "BACKEND"]
