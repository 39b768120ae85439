"""Projective-output quantum channels: entropies, additivity, capacities and entanglement of formation."""

try:
    from ._projchan import *  # noqa: F401,F403
except ImportError:
    from _projchan import *  # noqa: F401,F403

__version__ = "0.1.0"
