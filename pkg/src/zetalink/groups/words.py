"""Freely reduced words over an indexed generating set."""

from __future__ import annotations

from typing import Iterable, Iterator, Tuple


class Word:
    """A freely reduced word.

    Letters are nonzero integers: ``+(i+1)`` stands for generator ``i`` and
    ``-(i+1)`` for its inverse.  Construction reduces adjacent cancelling
    pairs, so two words compare equal iff they are the same element of the
    free group.
    """

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[int] = ()):
        stack: list[int] = []
        for letter in letters:
            if letter == 0:
                raise ValueError("letters must be nonzero signed integers")
            if stack and stack[-1] == -letter:
                stack.pop()
            else:
                stack.append(letter)
        object.__setattr__(self, "letters", tuple(stack))

    def __setattr__(self, name, value):
        raise AttributeError("Word is immutable")

    @staticmethod
    def generator(index: int) -> "Word":
        if index < 0:
            raise ValueError("generator index must be non-negative")
        return Word((index + 1,))

    @staticmethod
    def identity() -> "Word":
        return Word()

    # ------------------------------------------------------------- algebra

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(tuple(-l for l in reversed(self.letters)))

    def __pow__(self, n: int) -> "Word":
        if n == 0:
            return Word()
        base = self if n > 0 else self.inverse()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    def conjugate(self, by: "Word") -> "Word":
        """``by * self * by^-1``."""
        return by * self * by.inverse()

    @staticmethod
    def commutator(u: "Word", v: "Word") -> "Word":
        """``u v u^-1 v^-1``."""
        return u * v * u.inverse() * v.inverse()

    # ------------------------------------------------------------ queries

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self) -> Iterator[int]:
        return iter(self.letters)

    def max_index(self) -> int:
        """Largest generator index used, or -1 for the identity."""
        return max((abs(l) - 1 for l in self.letters), default=-1)

    def exponent_sums(self, num_generators: int) -> Tuple[int, ...]:
        sums = [0] * num_generators
        for letter in self.letters:
            sums[abs(letter) - 1] += 1 if letter > 0 else -1
        return tuple(sums)

    def cyclically_reduced(self) -> Tuple["Word", "Word"]:
        """Return ``(core, s)`` with ``self == s * core * s^-1`` and core cyclically reduced."""
        letters = list(self.letters)
        prefix: list[int] = []
        while len(letters) >= 2 and letters[0] == -letters[-1]:
            prefix.append(letters[0])
            letters = letters[1:-1]
        return Word(letters), Word(prefix)

    def rotations(self) -> Iterator["Word"]:
        """All cyclic rotations (conjugates by prefixes) of the word."""
        n = len(self.letters)
        if n == 0:
            yield self
            return
        for k in range(n):
            yield Word(self.letters[k:] + self.letters[:k])

    # ----------------------------------------------------------- plumbing

    def remap(self, index_map) -> "Word":
        """Apply ``index_map`` (old generator index -> new index) letterwise."""
        out = []
        for letter in self.letters:
            new = index_map[abs(letter) - 1]
            out.append(new + 1 if letter > 0 else -(new + 1))
        return Word(out)

    def substitute(self, index: int, replacement: "Word") -> "Word":
        """Replace every occurrence of generator ``index`` by ``replacement``."""
        out: list[int] = []
        rep = replacement.letters
        rep_inv = replacement.inverse().letters
        for letter in self.letters:
            if abs(letter) - 1 == index:
                out.extend(rep if letter > 0 else rep_inv)
            else:
                out.append(letter)
        return Word(out)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Word):
            return NotImplemented
        return self.letters == other.letters

    def __hash__(self) -> int:
        return hash(self.letters)

    def __repr__(self) -> str:
        return f"Word({self.letters})"
