from ._core import *  # noqa: F401,F403
from ._core import FracpError, NotConverged, __doc__  # noqa: F401
