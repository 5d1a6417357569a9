"""Group presentations, a text grammar for them, and cyclic characters.

The text form is ``gens: a, b ; rels: a^2, [a,b], a*b*a^-1*b^-1`` where ``*``
concatenates, ``^`` takes integer powers, ``[u,v]`` is the commutator
``u v u^-1 v^-1`` and ``1`` is the empty word.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional, Sequence, Tuple, Union

from ..errors import ZetalinkError
from .words import Word


class GrammarError(ZetalinkError):
    """Malformed presentation or word text."""


class BadParameters(ZetalinkError):
    """Parameters outside a builtin family's allowed range."""


class NotSurjective(ZetalinkError):
    """Character has no generator mapping to a unit of Z/d."""


_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN_RE = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*|-?\d+|[,;:*^\[\]()])")


def _tokenize(text: str) -> list[str]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip():
                raise GrammarError(f"unexpected character at {text[pos:pos + 10]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    return tokens


class _WordParser:
    def __init__(self, tokens: Sequence[str], names: Mapping[str, int]):
        self.tokens = list(tokens)
        self.names = names
        self.pos = 0

    def peek(self) -> Optional[str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> str:
        tok = self.peek()
        if tok is None:
            raise GrammarError("unexpected end of input")
        self.pos += 1
        return tok

    def expect(self, tok: str) -> None:
        got = self.take()
        if got != tok:
            raise GrammarError(f"expected {tok!r}, got {got!r}")

    def parse_word(self) -> Word:
        out = self.parse_factor()
        while self.peek() == "*":
            self.take()
            out = out * self.parse_factor()
        return out

    def parse_factor(self) -> Word:
        atom = self.parse_atom()
        if self.peek() == "^":
            self.take()
            exp_tok = self.take()
            try:
                exponent = int(exp_tok)
            except ValueError:
                raise GrammarError(f"exponent must be an integer, got {exp_tok!r}")
            return atom**exponent
        return atom

    def parse_atom(self) -> Word:
        tok = self.take()
        if tok == "(":
            inner = self.parse_word()
            self.expect(")")
            return inner
        if tok == "[":
            left = self.parse_word()
            self.expect(",")
            right = self.parse_word()
            self.expect("]")
            return Word.commutator(left, right)
        if tok == "1":
            return Word()
        if tok in self.names:
            return Word.generator(self.names[tok])
        raise GrammarError(f"unknown generator {tok!r}")


def parse_word(text: str, names: Mapping[str, int]) -> Word:
    parser = _WordParser(_tokenize(text), names)
    word = parser.parse_word()
    if parser.peek() is not None:
        raise GrammarError(f"trailing tokens after word: {parser.tokens[parser.pos:]}")
    return word


def format_word(word: Word, generators: Sequence[str]) -> str:
    if word.is_identity:
        return "1"
    runs: list[tuple[int, int]] = []
    for letter in word.letters:
        idx = abs(letter) - 1
        sign = 1 if letter > 0 else -1
        if runs and runs[-1][0] == idx and (runs[-1][1] > 0) == (sign > 0):
            runs[-1] = (idx, runs[-1][1] + sign)
        else:
            runs.append((idx, sign))
    parts = []
    for idx, exponent in runs:
        name = generators[idx]
        parts.append(name if exponent == 1 else f"{name}^{exponent}")
    return "*".join(parts)


@dataclass(frozen=True)
class Presentation:
    """Named generators plus freely reduced relator words."""

    generators: Tuple[str, ...]
    relators: Tuple[Word, ...]
    metadata: Mapping[str, object] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(self.generators))
        object.__setattr__(self, "relators", tuple(self.relators))
        seen = set()
        for name in self.generators:
            if not _NAME_RE.fullmatch(name) or name == "1":
                raise GrammarError(f"invalid generator name {name!r}")
            if name in seen:
                raise GrammarError(f"duplicate generator name {name!r}")
            seen.add(name)
        for relator in self.relators:
            if relator.max_index() >= len(self.generators):
                raise GrammarError(
                    f"relator {relator!r} uses a generator index out of range"
                )

    # ------------------------------------------------------------ helpers

    @property
    def num_generators(self) -> int:
        return len(self.generators)

    def generator_index(self, name: str) -> int:
        try:
            return self.generators.index(name)
        except ValueError:
            raise GrammarError(f"no generator named {name!r}")

    def word(self, text: str) -> Word:
        """Parse a word in this presentation's generators."""
        names = {name: i for i, name in enumerate(self.generators)}
        return parse_word(text, names)

    def exponent_matrix(self) -> list[list[int]]:
        """Relator-by-generator exponent sums (the abelianized relation matrix)."""
        return [list(r.exponent_sums(self.num_generators)) for r in self.relators]

    # --------------------------------------------------------------- text

    def to_text(self) -> str:
        gens = ", ".join(self.generators)
        rels = ", ".join(format_word(r, self.generators) for r in self.relators)
        return f"gens: {gens} ; rels: {rels}"

    @staticmethod
    def from_text(text: str, metadata: Optional[Mapping[str, object]] = None) -> "Presentation":
        tokens = _tokenize(text)
        if tokens[:2] != ["gens", ":"]:
            raise GrammarError("presentation text must start with 'gens:'")
        pos = 2
        names: list[str] = []
        while pos < len(tokens) and tokens[pos] != ";":
            tok = tokens[pos]
            if tok == ",":
                pos += 1
                continue
            if not _NAME_RE.fullmatch(tok):
                raise GrammarError(f"invalid generator name {tok!r}")
            names.append(tok)
            pos += 1
        if pos >= len(tokens):
            raise GrammarError("missing ';' between generators and relators")
        pos += 1
        if tokens[pos : pos + 2] != ["rels", ":"]:
            raise GrammarError("expected 'rels:' after ';'")
        pos += 2
        name_map = {name: i for i, name in enumerate(names)}
        parser = _WordParser(tokens[pos:], name_map)
        relators: list[Word] = []
        if parser.peek() is not None:
            relators.append(parser.parse_word())
            while parser.peek() == ",":
                parser.take()
                relators.append(parser.parse_word())
            if parser.peek() is not None:
                raise GrammarError(
                    f"trailing tokens: {parser.tokens[parser.pos:]}"
                )
        return Presentation(tuple(names), tuple(relators), dict(metadata or {}))

    # --------------------------------------------------------------- json

    def to_json(self) -> dict:
        return {
            "generators": list(self.generators),
            "relators": [format_word(r, self.generators) for r in self.relators],
            "metadata": json.loads(json.dumps(dict(self.metadata))),
        }

    @staticmethod
    def from_json(data: Mapping) -> "Presentation":
        names = list(data["generators"])
        name_map = {name: i for i, name in enumerate(names)}
        relators = tuple(parse_word(t, name_map) for t in data["relators"])
        return Presentation(tuple(names), relators, dict(data.get("metadata", {})))


class CyclicCharacter:
    """A homomorphism onto Z/d given by residues assigned to the generators.

    Well-definedness (every relator maps to 0 mod d) is checked at
    construction time.
    """

    def __init__(
        self,
        presentation: Presentation,
        modulus: int,
        images: Union[Mapping[str, int], Sequence[int]],
    ):
        if modulus < 1:
            raise BadParameters("modulus must be >= 1")
        if isinstance(images, Mapping):
            vec = [0] * presentation.num_generators
            for name, value in images.items():
                vec[presentation.generator_index(name)] = value
        else:
            vec = list(images)
            if len(vec) != presentation.num_generators:
                raise BadParameters("one image per generator required")
        self.presentation = presentation
        self.modulus = modulus
        self.images = tuple(v % modulus for v in vec)
        for relator in presentation.relators:
            if self.value(relator) != 0:
                raise BadParameters(
                    f"character is not well defined: relator {relator!r} "
                    f"maps to {self.value(relator)} mod {modulus}"
                )

    def value(self, word: Word) -> int:
        total = 0
        for letter in word.letters:
            img = self.images[abs(letter) - 1]
            total += img if letter > 0 else -img
        return total % self.modulus

    def unit_generator(self) -> int:
        """Index of the first generator whose image is a unit mod d."""
        for i, img in enumerate(self.images):
            if math.gcd(img, self.modulus) == 1:
                return i
        raise NotSurjective(
            f"no generator maps to a unit of Z/{self.modulus}"
        )

    def __repr__(self) -> str:
        pairs = ", ".join(
            f"{name}->{img}"
            for name, img in zip(self.presentation.generators, self.images)
        )
        return f"CyclicCharacter(mod {self.modulus}: {pairs})"
