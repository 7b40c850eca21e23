"""Figure generation from hyperres CSV/JSON artifacts.

Read-only consumer of the solver's exported files; no mathematics is
recomputed here.
"""

__version__ = "0.1.0"
