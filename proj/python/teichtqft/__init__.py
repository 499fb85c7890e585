from ._teichtqft import *  # noqa: F401,F403
