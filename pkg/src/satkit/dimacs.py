"""DIMACS-CNF reading and writing.

The reader accepts comment lines anywhere, clauses spanning or sharing
lines (only the ``0`` terminator delimits clauses), and the SATLIB
footer convention: once the declared clause count has been read, any
remaining content (typically ``%`` and a stray ``0``) is ignored. The
header clause count is otherwise enforced strictly.

The writer emits the canonical form used by the round-trip tests: no
comments, one clause per line, LF line endings, ASCII.
"""

from __future__ import annotations

import re

from .cnf import Clause, CnfFormula
from .errors import SatkitError

_HEADER = re.compile(r"p\s+cnf\s+(\d+)\s+(\d+)\s*$")


class DimacsError(SatkitError):
    """Malformed DIMACS input."""


class MissingHeaderError(DimacsError):
    pass


class ClauseCountMismatchError(DimacsError):
    pass


class LiteralOutOfRangeError(DimacsError):
    pass


class UnterminatedClauseError(DimacsError):
    pass


def parse_dimacs(data: "str | bytes") -> CnfFormula:
    if isinstance(data, bytes):
        try:
            text = data.decode("ascii")
        except UnicodeDecodeError as exc:
            raise DimacsError(f"DIMACS input must be ASCII: {exc}") from None
    else:
        text = data

    lines = text.splitlines()
    num_vars = num_clauses = -1
    body_start = 0
    for i, raw in enumerate(lines):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        m = _HEADER.match(line)
        if m is None:
            raise MissingHeaderError(f"expected 'p cnf V C' header, got {line[:60]!r}")
        num_vars, num_clauses = int(m.group(1)), int(m.group(2))
        body_start = i + 1
        break
    if num_vars < 0:
        raise MissingHeaderError("no 'p cnf' header found")

    clauses: list[Clause] = []
    current: list[int] = []
    done = len(clauses) == num_clauses
    for raw in lines[body_start:]:
        if done:
            break
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        for tok in line.split():
            try:
                code = int(tok)
            except ValueError:
                raise DimacsError(f"invalid token {tok!r} in clause data") from None
            if code == 0:
                if not current:
                    raise DimacsError("empty clause (bare '0') is not supported")
                clauses.append(Clause.from_codes(current))
                current = []
                if len(clauses) == num_clauses:
                    done = True
                    break
            else:
                if abs(code) > num_vars:
                    raise LiteralOutOfRangeError(
                        f"literal {code} exceeds declared variable count {num_vars}"
                    )
                current.append(code)

    if current:
        raise UnterminatedClauseError(
            f"clause {' '.join(map(str, current))} is missing its '0' terminator"
        )
    if len(clauses) != num_clauses:
        raise ClauseCountMismatchError(
            f"header declares {num_clauses} clauses, found {len(clauses)}"
        )
    return CnfFormula(num_vars, tuple(clauses))


def write_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.num_vars} {formula.num_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(c) for c in clause.codes()) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs_file(path) -> CnfFormula:
    with open(path, "rb") as fh:
        return parse_dimacs(fh.read())


def write_dimacs_file(formula: CnfFormula, path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(write_dimacs(formula))
