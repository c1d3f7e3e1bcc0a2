"""Translator-client boundary for the natural-language stage.

Translation itself is delegated to an external service; this module
fixes the contract. ``StubTranslator`` answers from a fixture table and
is what every test uses, so the suite never needs the network.
``HttpTranslator`` speaks the JSON contract to a live endpoint, with
the credential taken from an environment variable.

Session contract: a client accumulates a glossary (atom -> source
phrase) across calls, and repeated concepts reuse the same atom name.
The first phrase recorded for an atom wins.
"""

from __future__ import annotations

import json
import os
import threading
import urllib.error
import urllib.request
import uuid
from dataclasses import dataclass, field
from typing import Mapping, Protocol

from ..errors import SatkitError
from .parser import ExpressionError, parse_expression

DEFAULT_INSTRUCTION_TEMPLATE = "functional-prefix-v1"
DEFAULT_API_KEY_ENV = "SATKIT_TRANSLATOR_API_KEY"


class TranslatorError(SatkitError):
    pass


class TranslatorUnavailableError(TranslatorError):
    """Network, HTTP or authentication failure while contacting the service."""


class MalformedTranslationError(TranslatorError):
    """The service replied, but the reply is unusable. Carries the raw reply."""

    def __init__(self, message: str, raw: str):
        super().__init__(f"{message}: {raw!r}")
        self.raw = raw


@dataclass(frozen=True)
class TranslationRequest:
    sentence: str
    session_id: str
    instruction_template: str = DEFAULT_INSTRUCTION_TEMPLATE


@dataclass(frozen=True)
class TranslationResponse:
    expression: str
    glossary: Mapping[str, str] = field(default_factory=dict)


class TranslatorClient(Protocol):
    glossary: dict[str, str]

    def translate(self, sentence: str) -> TranslationResponse: ...


class StubTranslator:
    """Deterministic fixture-table translator.

    Fixture lines are ``sentence TAB expression TAB atom=phrase;...``
    with the glossary field optional. Unknown sentences raise
    MalformedTranslationError, mirroring a service that cannot answer.
    """

    def __init__(self, table: Mapping[str, TranslationResponse]):
        self.table = dict(table)
        self.glossary: dict[str, str] = {}
        self._glossary_lock = threading.Lock()  # single-writer session glossary

    @classmethod
    def from_fixture_text(cls, text: str) -> "StubTranslator":
        table = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) < 2:
                raise ValueError(f"fixture line {lineno} needs 'sentence<TAB>expression'")
            sentence, expression = parts[0].strip(), parts[1].strip()
            glossary = {}
            if len(parts) > 2 and parts[2].strip():
                for entry in parts[2].split(";"):
                    entry = entry.strip()
                    if not entry:
                        continue
                    atom, _, phrase = entry.partition("=")
                    glossary[atom.strip()] = phrase.strip()
            table[sentence] = TranslationResponse(expression, glossary)
        return cls(table)

    @classmethod
    def from_fixture_file(cls, path) -> "StubTranslator":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_fixture_text(fh.read())

    def translate(self, sentence: str) -> TranslationResponse:
        key = sentence.strip()
        if key not in self.table:
            raise MalformedTranslationError("sentence not in fixture table", key)
        response = self.table[key]
        with self._glossary_lock:
            for atom, phrase in response.glossary.items():
                self.glossary.setdefault(atom, phrase)
        return response


class HttpTranslator:
    """JSON-over-HTTP client for a live translation endpoint.

    Request body: {"sentence", "session_id", "instruction_template"}.
    Expected reply: {"expression": str, "glossary": {atom: phrase}}.
    """

    def __init__(
        self,
        endpoint: str,
        timeout_s: float = 30.0,
        api_key_env: str = DEFAULT_API_KEY_ENV,
        session_id: "str | None" = None,
        instruction_template: str = DEFAULT_INSTRUCTION_TEMPLATE,
    ):
        self.endpoint = endpoint
        self.timeout_s = timeout_s
        self.api_key_env = api_key_env
        self.session_id = session_id or uuid.uuid4().hex
        self.instruction_template = instruction_template
        self.glossary: dict[str, str] = {}
        self._glossary_lock = threading.Lock()  # single-writer session glossary

    def translate(self, sentence: str) -> TranslationResponse:
        body = json.dumps(
            {
                "sentence": sentence,
                "session_id": self.session_id,
                "instruction_template": self.instruction_template,
            }
        ).encode("utf-8")
        headers = {"Content-Type": "application/json"}
        api_key = os.environ.get(self.api_key_env)
        if api_key:
            headers["Authorization"] = f"Bearer {api_key}"
        request = urllib.request.Request(self.endpoint, data=body, headers=headers)
        try:
            with urllib.request.urlopen(request, timeout=self.timeout_s) as reply:
                raw = reply.read().decode("utf-8", errors="replace")
        except urllib.error.HTTPError as exc:
            raise TranslatorUnavailableError(f"translator returned HTTP {exc.code}") from exc
        except (urllib.error.URLError, OSError) as exc:
            raise TranslatorUnavailableError(f"translator unreachable: {exc}") from exc
        try:
            payload = json.loads(raw)
            expression = payload["expression"]
            glossary = dict(payload.get("glossary", {}))
        except (json.JSONDecodeError, KeyError, TypeError, AttributeError):
            raise MalformedTranslationError("reply is not the expected JSON shape", raw) from None
        if not isinstance(expression, str):
            raise MalformedTranslationError("'expression' is not a string", raw)
        with self._glossary_lock:
            for atom, phrase in glossary.items():
                self.glossary.setdefault(str(atom), str(phrase))
        return TranslationResponse(expression, glossary)


def translate_sentence(client: TranslatorClient, sentence: str) -> TranslationResponse:
    """Call the client and enforce the contract: the reply must parse
    under the expression grammar."""
    response = client.translate(sentence)
    try:
        parse_expression(response.expression)
    except ExpressionError as exc:
        raise MalformedTranslationError(
            f"translated expression does not parse ({exc})", response.expression
        ) from None
    return response
