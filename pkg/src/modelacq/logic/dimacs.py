"""DIMACS CNF and (old-style) WCNF reading and writing.

WCNF uses the ``p wcnf nvars nclauses top`` header; a clause whose weight is
``top`` is hard.
"""

from __future__ import annotations

from typing import List, Optional

from ..errors import ModelAcqError
from .cnf import Cnf


class DimacsParseError(ModelAcqError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


def write_dimacs(cnf: Cnf) -> str:
    if cnf.is_weighted:
        return write_wcnf(cnf)
    lines = [f"p cnf {cnf.num_vars} {len(cnf.clauses)}"]
    lines += [" ".join(map(str, c + (0,))) for c in cnf.clauses]
    return "\n".join(lines) + "\n"


def write_wcnf(cnf: Cnf, top: Optional[int] = None) -> str:
    soft_total = sum(w for _, w in cnf.soft())
    if top is None:
        top = soft_total + 1
    elif top <= soft_total:
        raise ValueError("top must exceed the sum of soft weights")
    weights = cnf.weights or [None] * len(cnf.clauses)
    lines = [f"p wcnf {cnf.num_vars} {len(cnf.clauses)} {top}"]
    for c, w in zip(cnf.clauses, weights):
        lines.append(" ".join(map(str, (top if w is None else w,) + c + (0,))))
    return "\n".join(lines) + "\n"


def read_dimacs(text: str) -> Cnf:
    """Parse DIMACS CNF or WCNF text.

    Clauses may span lines; every clause must be terminated by ``0``.
    """
    header = None
    fmt = None
    top = None
    declared = 0
    clauses: List[tuple] = []
    weights: List[Optional[int]] = []
    pending: List[int] = []
    pending_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            if header is not None:
                raise DimacsParseError("duplicate header", lineno)
            parts = line.split()
            if len(parts) < 4 or parts[1] not in ("cnf", "wcnf"):
                raise DimacsParseError(f"bad header {line!r}", lineno)
            fmt = parts[1]
            try:
                nums = [int(p) for p in parts[2:]]
            except ValueError:
                raise DimacsParseError(f"bad header {line!r}", lineno) from None
            if fmt == "cnf" and len(nums) != 2 or fmt == "wcnf" and len(nums) not in (2, 3):
                raise DimacsParseError(f"bad header {line!r}", lineno)
            header = nums
            declared = nums[1]
            top = nums[2] if fmt == "wcnf" and len(nums) == 3 else None
            continue
        if header is None:
            raise DimacsParseError("clause before header", lineno)
        try:
            toks = [int(t) for t in line.split()]
        except ValueError:
            raise DimacsParseError(f"non-integer token in {line!r}", lineno) from None
        if not pending:
            pending_line = lineno
        for t in toks:
            if t == 0:
                if fmt == "wcnf":
                    if not pending:
                        raise DimacsParseError("missing weight", lineno)
                    w, lits = pending[0], pending[1:]
                    if w <= 0:
                        raise DimacsParseError(f"non-positive weight {w}", lineno)
                    weights.append(None if top is not None and w >= top else w)
                    clauses.append(tuple(lits))
                else:
                    clauses.append(tuple(pending))
                pending = []
            else:
                pending.append(t)
    if header is None:
        raise DimacsParseError("missing header", 0)
    if pending:
        raise DimacsParseError("clause not terminated by 0", pending_line)
    if len(clauses) != declared:
        raise DimacsParseError(f"header declares {declared} clauses, found {len(clauses)}", 0)
    num_vars = header[0]
    for c in clauses:
        for l in c:
            if abs(l) > num_vars:
                raise DimacsParseError(f"literal {l} exceeds declared {num_vars} variables", 0)
    cnf = Cnf(num_vars, allow_empty=True)
    for c, w in zip(clauses, weights if fmt == "wcnf" else [None] * len(clauses)):
        cnf.add_clause(c, w)
    if fmt == "wcnf" and cnf.weights is None:
        cnf.weights = [None] * len(cnf.clauses)
    return cnf
