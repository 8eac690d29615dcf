"""Graded sign calculus, replayable derivations and the finite stable splitting."""

from .derivations import *  # noqa: F401,F403
from .derivations import __all__ as _derivations_all
from .graded import *  # noqa: F401,F403
from .graded import __all__ as _graded_all
from .splitting import *  # noqa: F401,F403
from .splitting import __all__ as _splitting_all

__all__ = list(_graded_all) + list(_derivations_all) + list(_splitting_all)
