from ._rollupgames import *  # noqa: F401,F403
from ._rollupgames import __doc__  # noqa: F401
