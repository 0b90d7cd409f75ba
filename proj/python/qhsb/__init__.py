from ._qhsb import *  # noqa: F401,F403
from ._qhsb import __doc__  # noqa: F401
