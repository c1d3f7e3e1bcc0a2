"""End-to-end document compilation: sentences -> expressions -> CNF."""

from __future__ import annotations

from typing import Iterable

from ..cnf import CnfFormula
from ..errors import SatkitError
from .convert import DEFAULT_CLAUSE_CAP, SymbolTable, simplify_cnf, to_cnf
from .expressions import And, LogicalExpr
from .parser import parse_expression
from .sentences import DEFAULT_ABBREVIATIONS, split_sentences
from .translate import TranslatorClient, TranslatorError, translate_sentence


class DocumentError(SatkitError):
    """One or more sentences failed to translate or parse.

    ``failures`` is a list of (sentence_index, sentence, error).
    """

    def __init__(self, failures: list[tuple[int, str, Exception]]):
        detail = "; ".join(f"sentence {i}: {err}" for i, _, err in failures)
        super().__init__(f"document compilation failed: {detail}")
        self.failures = failures


def conjoin(exprs: list[LogicalExpr]) -> LogicalExpr:
    if not exprs:
        raise ValueError("nothing to conjoin")
    return exprs[0] if len(exprs) == 1 else And(tuple(exprs))


def compile_document(
    text: str,
    client: TranslatorClient,
    abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
    max_clauses: int = DEFAULT_CLAUSE_CAP,
) -> tuple[CnfFormula, SymbolTable]:
    """Split, translate and parse each sentence, conjoin the expressions,
    convert to CNF and simplify. Per-sentence failures are aggregated
    into a single DocumentError carrying the sentence indices."""
    sentences = split_sentences(text, abbreviations)
    exprs: list[LogicalExpr] = []
    failures: list[tuple[int, str, Exception]] = []
    for i, sentence in enumerate(sentences):
        try:
            response = translate_sentence(client, sentence)
            exprs.append(parse_expression(response.expression))
        except TranslatorError as exc:
            failures.append((i, sentence, exc))
    if failures:
        raise DocumentError(failures)
    table = SymbolTable()
    formula = to_cnf(conjoin(exprs), table, max_clauses)
    return simplify_cnf(formula), table
