"""Exception hierarchy shared by every stage of the pipeline.

The CLI maps any ``ModelAcqError`` to exit status 1; everything else is a bug.
"""


class ModelAcqError(Exception):
    """Base class for domain-level failures (bad input, infeasible request)."""
