"""Expansivity classifiers and shadowing certificates for weighted shifts
and matrices. The heavy lifting lives in the compiled extension; this
package just re-exports it."""

from ._lindyn import *  # noqa: F401,F403
from ._lindyn import __version__  # noqa: F401
