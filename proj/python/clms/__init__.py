"""Constrained LMS adaptive filter: closed-form mean-square theory and Monte Carlo harness."""

try:
    from ._clms import *  # noqa: F401,F403
    from ._clms import __doc__ as _native_doc  # noqa: F401
except ImportError:  # in-tree build: extension sits next to, not inside, the package
    from _clms import *  # noqa: F401,F403

__version__ = "0.1.0"
