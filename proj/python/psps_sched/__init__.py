"""Day-ahead power shutoff and critical-peak-pricing scheduling.

Everything lives in the compiled extension; this package only re-exports it.
"""

from ._psps import *  # noqa: F401,F403
from ._psps import __doc__, __version__  # noqa: F401
