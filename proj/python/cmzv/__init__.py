from ._cmzv import *  # noqa: F401,F403
from ._cmzv import __version__  # noqa: F401
