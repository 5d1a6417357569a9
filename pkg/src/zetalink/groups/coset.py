"""HLT-style Todd-Coxeter coset enumeration and finite derived series."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from ..errors import ZetalinkError
from .presentation import Presentation
from .words import Word

COMPLETE = "complete"
CAP_EXCEEDED = "cap_exceeded"


class IncompleteTable(ZetalinkError):
    """Operation requires a completed coset table."""


@dataclass
class CosetTable:
    """Result of a coset enumeration.

    ``rows[c][2*i]`` is the coset reached from ``c`` by generator ``i`` and
    ``rows[c][2*i + 1]`` the one reached by its inverse.  Rows are only
    guaranteed fully defined when ``status == "complete"``; then the columns
    are permutations, every relator fixes every coset, and ``index`` is the
    subgroup index (the group order for the trivial subgroup).
    """

    presentation: Presentation
    subgroup: Tuple[Word, ...]
    cap: int
    status: str
    rows: List[List[Optional[int]]] = field(default_factory=list)

    @property
    def index(self) -> int:
        if self.status != COMPLETE:
            raise IncompleteTable(f"enumeration status is {self.status!r}")
        return len(self.rows)

    def generator_permutation(self, i: int) -> Tuple[int, ...]:
        if self.status != COMPLETE:
            raise IncompleteTable(f"enumeration status is {self.status!r}")
        return tuple(self.rows[c][2 * i] for c in range(len(self.rows)))

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "cap": self.cap,
            "num_cosets": len(self.rows) if self.status == COMPLETE else None,
            "table": self.rows if self.status == COMPLETE else None,
        }


def _column(letter: int) -> int:
    index = abs(letter) - 1
    return 2 * index + (0 if letter > 0 else 1)


def _inverse_column(letter: int) -> int:
    return _column(-letter)


class _Enumerator:
    def __init__(self, num_generators: int, cap: int):
        self.ncols = 2 * num_generators
        self.cap = cap
        self.table: List[List[Optional[int]]] = [[None] * self.ncols]
        self.parent: List[int] = [0]  # union-find over coset numbers
        self.queue: List[Tuple[int, int]] = []
        self.exceeded = False

    # union-find -----------------------------------------------------------

    def rep(self, c: int) -> int:
        while self.parent[c] != c:
            self.parent[c] = self.parent[self.parent[c]]
            c = self.parent[c]
        return c

    # definitions and deductions -------------------------------------------

    def define(self, c: int, col: int) -> Optional[int]:
        if len(self.table) >= self.cap:
            self.exceeded = True
            return None
        new = len(self.table)
        self.table.append([None] * self.ncols)
        self.parent.append(new)
        self.table[c][col] = new
        self.table[new][col ^ 1] = c
        return new

    def deduce(self, c: int, col: int, d: int) -> None:
        """Record c·col = d, queueing a coincidence on conflict."""
        for a, acol, b in ((c, col, d), (d, col ^ 1, c)):
            existing = self.table[a][acol]
            if existing is None:
                self.table[a][acol] = b
            elif self.rep(existing) != self.rep(b):
                self.queue.append((existing, b))

    def merge_pending(self) -> None:
        while self.queue:
            a, b = self.queue.pop()
            a, b = self.rep(a), self.rep(b)
            if a == b:
                continue
            if b < a:
                a, b = b, a
            self.parent[b] = a
            row = self.table[b]
            for col in range(self.ncols):
                if row[col] is not None:
                    self.deduce(a, col, row[col])
                    row[col] = None

    # scanning ---------------------------------------------------------------

    def scan_and_fill(self, start: int, word: Word) -> None:
        letters = word.letters
        if not letters:
            return
        while True:
            start = self.rep(start)
            # forward scan
            f = start
            fi = 0
            while fi < len(letters):
                nxt = self.table[f][_column(letters[fi])]
                if nxt is None:
                    break
                f = self.rep(nxt)
                fi += 1
            if fi == len(letters):
                if f != start:
                    self.queue.append((f, start))
                    self.merge_pending()
                return
            # backward scan
            b = start
            bi = len(letters)
            while bi > fi:
                prv = self.table[b][_inverse_column(letters[bi - 1])]
                if prv is None:
                    break
                b = self.rep(prv)
                bi -= 1
            if bi == fi:
                # scans met at the same word position: the cosets coincide
                if f != b:
                    self.queue.append((f, b))
                    self.merge_pending()
                return
            if bi == fi + 1:
                self.deduce(f, _column(letters[fi]), b)
                self.merge_pending()
                return
            # gap of length > 1: define one coset and rescan
            made = self.define(f, _column(letters[fi]))
            if made is None:
                return


def todd_coxeter(
    presentation: Presentation,
    subgroup: Sequence[Word] = (),
    cap: int = 10**6,
) -> CosetTable:
    """Enumerate cosets of the subgroup generated by ``subgroup`` words.

    Deterministic HLT strategy with row filling.  Returns a table with
    status ``"cap_exceeded"`` (never raises) when more than ``cap`` cosets
    would be needed.
    """
    if cap < 1:
        raise ValueError("cap must be >= 1")
    subgroup = tuple(subgroup)
    enum = _Enumerator(presentation.num_generators, cap)

    for word in subgroup:
        enum.scan_and_fill(0, word)
        if enum.exceeded:
            return CosetTable(presentation, subgroup, cap, CAP_EXCEEDED)

    while True:
        c = 0
        while c < len(enum.table):
            if enum.rep(c) != c:
                c += 1
                continue
            for relator in presentation.relators:
                enum.scan_and_fill(c, relator)
                if enum.exceeded:
                    return CosetTable(presentation, subgroup, cap, CAP_EXCEEDED)
                if enum.rep(c) != c:
                    break
            if enum.rep(c) == c:
                for col in range(enum.ncols):
                    if enum.table[c][col] is None:
                        if enum.define(c, col) is None:
                            return CosetTable(
                                presentation, subgroup, cap, CAP_EXCEEDED
                            )
            c += 1
        # verification sweep; coincidences during the pass can leave stale
        # rows behind, in which case another pass is required
        clean = all(
            _scans_cleanly(enum, c, word)
            for c in range(len(enum.table))
            if enum.rep(c) == c
            for word in presentation.relators
        ) and all(_scans_cleanly(enum, 0, word) for word in subgroup)
        if clean:
            break

    live = [c for c in range(len(enum.table)) if enum.rep(c) == c]
    renumber = {c: i for i, c in enumerate(live)}
    rows = [
        [renumber[enum.rep(enum.table[c][col])] for col in range(enum.ncols)]
        for c in live
    ]
    return CosetTable(presentation, subgroup, cap, COMPLETE, rows)


def _scans_cleanly(enum: _Enumerator, start: int, word: Word) -> bool:
    c = enum.rep(start)
    for letter in word.letters:
        nxt = enum.table[c][_column(letter)]
        if nxt is None:
            return False
        c = enum.rep(nxt)
    return c == enum.rep(start)


# ---------------------------------------------------------------- finite groups


def _compose(p: Tuple[int, ...], q: Tuple[int, ...]) -> Tuple[int, ...]:
    """Permutation acting p then q (left to right)."""
    return tuple(q[p[i]] for i in range(len(p)))


def _invert(p: Tuple[int, ...]) -> Tuple[int, ...]:
    out = [0] * len(p)
    for i, v in enumerate(p):
        out[v] = i
    return tuple(out)


def _closure(generators: Sequence[Tuple[int, ...]], degree: int) -> set:
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    gens = [g for g in generators] + [_invert(g) for g in generators]
    while frontier:
        nxt = []
        for elem in frontier:
            for g in gens:
                prod = _compose(elem, g)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
        frontier = nxt
    return seen


def derived_series_finite(table: CosetTable) -> List[int]:
    """Orders along the derived series of the permutation group of the table.

    The list starts with the order of the group realized by the table's
    generator permutations and ends with 1 for solvable groups (for a
    perfect tail the list stops when the order stabilizes).
    """
    if table.status != COMPLETE:
        raise IncompleteTable(f"enumeration status is {table.status!r}")
    degree = len(table.rows)
    gens = [
        table.generator_permutation(i)
        for i in range(table.presentation.num_generators)
    ]
    group = _closure(gens, degree)
    orders = [len(group)]
    current = group
    while orders[-1] > 1:
        elems = sorted(current)
        commutators = set()
        for p in elems:
            for q in elems:
                commutators.add(
                    _compose(_compose(_compose(p, q), _invert(p)), _invert(q))
                )
        derived = _closure(sorted(commutators), degree)
        if len(derived) == len(current):
            break
        orders.append(len(derived))
        current = derived
    return orders
