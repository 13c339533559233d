"""Temperature-uncertainty bounds for non-equilibrium open quantum systems."""

try:
    from ._thermoqfi import *  # noqa: F401,F403
    from ._thermoqfi import __doc__ as _core_doc  # noqa: F401
except ImportError:  # build-tree layout: extension next to the package
    from _thermoqfi import *  # noqa: F401,F403
