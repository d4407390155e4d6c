"""Self-contained propositional toolbox: CNF, CDCL SAT, weighted MaxSAT,
DIMACS/WCNF IO and Decision-DNNF compilation."""

from .cnf import Assignment, Cnf, CnfError, cost, is_model, satisfies
from .ddnnf import (CapExceeded, Ddnnf, InvalidDdnnf, compile_ddnnf, condition, count_models,
                    evaluate, smallest_model, validate)
from .dimacs import DimacsParseError, read_dimacs, write_dimacs, write_wcnf
from .maxsat import HardUnsat, MaxSatResult, SolverBudgetExceeded, solve_maxsat
from .sat import SatSolver, solve_sat

__all__ = [
    "Assignment", "Cnf", "CnfError", "cost", "is_model", "satisfies",
    "CapExceeded", "Ddnnf", "InvalidDdnnf", "compile_ddnnf", "condition", "count_models",
    "evaluate", "smallest_model", "validate",
    "DimacsParseError", "read_dimacs", "write_dimacs", "write_wcnf",
    "HardUnsat", "MaxSatResult", "SolverBudgetExceeded", "solve_maxsat",
    "SatSolver", "solve_sat",
]
