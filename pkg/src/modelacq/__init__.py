"""Data-driven acquisition of STRIPS action models.

Subpackages:

* :mod:`modelacq.pddl` -- parse, ground and write a STRIPS+typing PDDL subset.
* :mod:`modelacq.traces` -- random walks, goal sampling, CSV/JSON trace IO.
* :mod:`modelacq.observation` -- observation tokens, tokenization, casting.
* :mod:`modelacq.extract` -- Observer and ARMS-style extraction, replay checks.
* :mod:`modelacq.logic` -- CDCL SAT, weighted MaxSAT, d-DNNF compilation.
* :mod:`modelacq.recommend` -- research-feature taxonomy and recommendations.
"""

from .errors import ModelAcqError

__version__ = "0.1.0"

__all__ = ["ModelAcqError", "__version__"]
