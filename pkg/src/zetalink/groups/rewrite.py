"""Presentation rewriting: kernel presentations, Tietze moves, consequence search."""

from __future__ import annotations

import heapq
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from ..errors import ZetalinkError
from .presentation import CyclicCharacter, Presentation
from .snf import smith_normal_form
from .words import Word

CONSEQUENCE = "consequence"
UNKNOWN = "unknown"


class NotEliminable(ZetalinkError):
    """Relator does not isolate the generator for a Tietze elimination."""


# ------------------------------------------------------------------ kernels


def reidemeister_schreier(
    presentation: Presentation, chi: CyclicCharacter
) -> Presentation:
    """Presentation of the kernel of a cyclic character.

    Uses the transversal ``{g^j : 0 <= j < d}`` for the first generator ``g``
    whose image is a unit mod ``d``.  The raw Schreier data gives
    ``d*(n-1) + 1`` generators (the ``d - 1`` freely trivial slots along the
    transversal are dropped) and ``d`` rewritten copies of each relator.
    """
    if chi.presentation is not presentation and chi.presentation != presentation:
        raise ValueError("character belongs to a different presentation")
    d = chi.modulus
    g = chi.unit_generator()
    u_inv = pow(chi.images[g], -1, d)
    n = presentation.num_generators

    # coset step: applying generator i moves coset j to j + step[i] (mod d)
    step = [(chi.images[i] * u_inv) % d for i in range(n)]

    # Schreier generator slots (j, i); slot (j, g) with j < d-1 is freely trivial
    slot_index: Dict[Tuple[int, int], int] = {}
    names: List[str] = []
    for i in range(n):
        for j in range(d):
            if i == g and j < d - 1:
                continue
            slot_index[(j, i)] = len(names)
            names.append(f"{presentation.generators[i]}_{j}")
    if len(set(names)) != len(names):
        names = [f"s{k}_{nm}" for k, nm in enumerate(names)]

    def rewrite(start: int, word: Word) -> Word:
        letters: List[int] = []
        coset = start
        for letter in word.letters:
            i = abs(letter) - 1
            if letter > 0:
                slot = slot_index.get((coset, i))
                if slot is not None:
                    letters.append(slot + 1)
                coset = (coset + step[i]) % d
            else:
                coset = (coset - step[i]) % d
                slot = slot_index.get((coset, i))
                if slot is not None:
                    letters.append(-(slot + 1))
        return Word(letters)

    relators = []
    for relator in presentation.relators:
        for j in range(d):
            rewritten = rewrite(j, relator)
            if not rewritten.is_identity:
                relators.append(rewritten)

    metadata = {
        "kind": "cyclic-kernel",
        "modulus": d,
        "transversal_generator": presentation.generators[g],
        "power_generator": names[slot_index[(d - 1, g)]],
    }
    return Presentation(tuple(names), tuple(relators), metadata)


# ------------------------------------------------------------------- Tietze


def tietze_eliminate(
    presentation: Presentation, gen: int, relator: int
) -> Presentation:
    """Remove a generator defined (up to the relator) by the other generators.

    The chosen relator must contain the generator exactly once, with exponent
    +-1; the generator is substituted away everywhere and both the generator
    and the relator disappear.  The group is unchanged.
    """
    if not (0 <= gen < presentation.num_generators):
        raise NotEliminable(f"generator index {gen} out of range")
    if not (0 <= relator < len(presentation.relators)):
        raise NotEliminable(f"relator index {relator} out of range")
    word = presentation.relators[relator]
    positions = [k for k, l in enumerate(word.letters) if abs(l) - 1 == gen]
    if len(positions) != 1:
        raise NotEliminable(
            f"generator {presentation.generators[gen]!r} occurs "
            f"{len(positions)} times in the relator"
        )
    k = positions[0]
    prefix = Word(word.letters[:k])
    suffix = Word(word.letters[k + 1 :])
    if word.letters[k] > 0:
        # prefix * gen * suffix = 1  =>  gen = prefix^-1 * suffix^-1
        replacement = prefix.inverse() * suffix.inverse()
    else:
        # prefix * gen^-1 * suffix = 1  =>  gen = suffix * prefix
        replacement = suffix * prefix
    index_map = {i: (i if i < gen else i - 1) for i in range(presentation.num_generators)}
    new_relators = []
    for m, other in enumerate(presentation.relators):
        if m == relator:
            continue
        substituted = other.substitute(gen, replacement)
        new_relators.append(substituted.remap(index_map))
    new_generators = tuple(
        nm for i, nm in enumerate(presentation.generators) if i != gen
    )
    return Presentation(new_generators, tuple(new_relators), dict(presentation.metadata))


def tietze_simplify(
    presentation: Presentation, keep: Iterable[str] = ()
) -> Presentation:
    """Greedily eliminate generators outside ``keep`` via single-occurrence relators.

    Deterministic: each step removes the (generator, relator) pair whose
    substitution grows the total relator length least.  Relators are kept
    cyclically reduced (a conjugacy move, so the group and even the normal
    closure data are unchanged) and empty ones are dropped.
    """
    keep_set = set(keep)
    current = _cyclic_tidy(presentation)
    while True:
        best = None  # (cost, gen, relator)
        for gen in range(current.num_generators):
            if current.generators[gen] in keep_set:
                continue
            occurrences = [
                sum(1 for l in word.letters if abs(l) - 1 == gen)
                for word in current.relators
            ]
            total = sum(occurrences)
            for r, count in enumerate(occurrences):
                if count != 1:
                    continue
                cost = (len(current.relators[r]) - 1) * (total - 1) - len(
                    current.relators[r]
                )
                key = (cost, gen, r)
                if best is None or key < best:
                    best = key
        if best is None:
            return current
        current = _cyclic_tidy(tietze_eliminate(current, best[1], best[2]))


def _cyclic_tidy(presentation: Presentation) -> Presentation:
    """Cyclically reduce all relators and drop duplicates and empties."""
    kept = []
    seen = set()
    for word in presentation.relators:
        core, _ = word.cyclically_reduced()
        if core.is_identity:
            continue
        canon = _cyclic_canon(core)
        mirror = _cyclic_canon(core.inverse())
        if canon in seen or mirror in seen:
            continue
        seen.add(canon)
        kept.append(core)
    return Presentation(
        presentation.generators, tuple(kept), dict(presentation.metadata)
    )


def kill_generators(
    presentation: Presentation, names: Sequence[str]
) -> Presentation:
    """Quotient by the normal closure of the named generators.

    Equivalent to adding each generator as a relator and Tietze-eliminating
    it: letters of killed generators are deleted from every relator and the
    generators are removed.
    """
    kill = {presentation.generator_index(nm) for nm in names}
    survivors = [i for i in range(presentation.num_generators) if i not in kill]
    index_map = {old: new for new, old in enumerate(survivors)}
    relators = []
    seen = set()
    for word in presentation.relators:
        stripped = Word(l for l in word.letters if abs(l) - 1 not in kill)
        remapped = stripped.remap(index_map) if not stripped.is_identity else Word()
        if remapped.is_identity or remapped in seen:
            continue
        seen.add(remapped)
        relators.append(remapped)
    metadata = dict(presentation.metadata)
    metadata["killed"] = sorted(presentation.generators[i] for i in kill)
    return Presentation(
        tuple(presentation.generators[i] for i in survivors),
        tuple(relators),
        metadata,
    )


# -------------------------------------------------------------- consequences


def _reduce_concat(u: Tuple[int, ...], v: Tuple[int, ...]) -> Tuple[int, ...]:
    """Free reduction of ``u + v`` assuming both parts are already reduced."""
    stack = list(u)
    for letter in v:
        if stack and stack[-1] == -letter:
            stack.pop()
        else:
            stack.append(letter)
    return tuple(stack)


def _least_rotation(s: Tuple[int, ...]) -> Tuple[int, ...]:
    """Booth's algorithm for the lexicographically least rotation."""
    n = len(s)
    if n <= 1:
        return s
    doubled = s + s
    f = [-1] * (2 * n)
    k = 0
    for j in range(1, 2 * n):
        sj = doubled[j]
        i = f[j - k - 1]
        while i != -1 and sj != doubled[k + i + 1]:
            if sj < doubled[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != doubled[k + i + 1]:
            if sj < doubled[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return doubled[k : k + n]


def _cyclic_canon_letters(letters: Tuple[int, ...]) -> Tuple[int, ...]:
    lo, hi = 0, len(letters)
    while hi - lo >= 2 and letters[lo] == -letters[hi - 1]:
        lo += 1
        hi -= 1
    return _least_rotation(letters[lo:hi])


def _cyclic_canon(word: Word) -> Tuple[int, ...]:
    """Canonical representative of the conjugacy class: cyclic reduction
    followed by the lexicographically least rotation."""
    return _cyclic_canon_letters(word.letters)


def consequence_search(
    presentation: Presentation,
    word: Word,
    depth: int,
    node_budget: int = 20_000,
) -> str:
    """Bounded search for ``word`` in the normal closure of the relators.

    Explores conjugacy classes of words: normal-closure membership is
    conjugation invariant, so states are canonical cyclic words and a move
    splices a conjugated relator into the state (a rotation of the state
    followed by a rotation of a relator or its inverse).  Moves that cancel
    at the splice point are tried at every position; non-cancelling moves
    only while the state is short, to escape dead ends.  Each move spends
    one of ``depth`` allowed relator applications.  Returns ``"consequence"``
    when the class of the identity is reached — a sound certificate — and
    ``"unknown"`` otherwise; ``"unknown"`` is never a refutation.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    start = _cyclic_canon(word)
    if not start:
        return CONSEQUENCE

    by_first: Dict[int, List[Tuple[int, ...]]] = {}
    plain: List[Tuple[int, ...]] = []
    seen_variants = set()
    for relator in presentation.relators:
        core, _ = relator.cyclically_reduced()
        if core.is_identity:
            continue
        plain.append(core.letters)
        plain.append(core.inverse().letters)
        for base in (core, core.inverse()):
            for rotation in base.rotations():
                if rotation.letters in seen_variants:
                    continue
                seen_variants.add(rotation.letters)
                by_first.setdefault(rotation.letters[0], []).append(rotation.letters)
    if not plain:
        return UNKNOWN

    longest = max(len(v) for v in plain)
    max_len = len(start) + 2 * longest + 4
    grow_limit = len(start) + longest

    best_apps: Dict[Tuple[int, ...], int] = {start: 0}
    heap: List[Tuple[int, Tuple[int, ...], int]] = [(len(start), start, 0)]

    def visit(candidate: Tuple[int, ...], apps: int) -> bool:
        canon = _cyclic_canon_letters(candidate)
        if not canon:
            return True
        if len(canon) <= max_len and apps < best_apps.get(canon, depth + 1):
            best_apps[canon] = apps
            heapq.heappush(heap, (len(canon), canon, apps))
        return False

    popped = 0
    while heap and popped < node_budget:
        _, state, apps = heapq.heappop(heap)
        popped += 1
        if apps > best_apps.get(state, depth) or apps >= depth:
            continue
        n = len(state)
        doubled = state + state
        for k in range(n):
            rotation = doubled[k : k + n]
            for variant in by_first.get(-rotation[-1], ()):
                if n + len(variant) - 2 > max_len + 2 * longest:
                    continue
                if visit(_reduce_concat(rotation, variant), apps + 1):
                    return CONSEQUENCE
        if n <= grow_limit:
            for variant in plain:
                if visit(_reduce_concat(state, variant), apps + 1):
                    return CONSEQUENCE
    return UNKNOWN


# ----------------------------------------------------------- class-2 checks


def _collect_class2(word: Word, n: int) -> Tuple[List[int], Dict[Tuple[int, int], int]]:
    """Normal form of a word in the free class-2 nilpotent group.

    Returns exponent sums and the exponents ``c[i,j]`` (i < j) of the basic
    commutators ``[g_i, g_j]`` after collecting letters into sorted order.
    """
    sums = [0] * n
    comm: Dict[Tuple[int, int], int] = {}
    placed: List[Tuple[int, int]] = []  # (generator, exponent), kept sorted
    for letter in word.letters:
        i = abs(letter) - 1
        e = 1 if letter > 0 else -1
        sums[i] += e
        # bubble the new letter left past larger generators; swapping
        # g_j^a g_i^e -> g_i^e g_j^a [g_i,g_j]^{-a e} in class 2
        pos = len(placed)
        while pos > 0 and placed[pos - 1][0] > i:
            j, a = placed[pos - 1]
            comm[(i, j)] = comm.get((i, j), 0) - a * e
            pos -= 1
        placed.insert(pos, (i, e))
        # merge equal neighbours
        merged: List[Tuple[int, int]] = []
        for gidx, exp in placed:
            if merged and merged[-1][0] == gidx:
                merged[-1] = (gidx, merged[-1][1] + exp)
            else:
                merged.append((gidx, exp))
        placed = [(gidx, exp) for gidx, exp in merged if exp != 0]
    return sums, {k: v for k, v in comm.items() if v != 0}


def _wedge_basis(n: int) -> List[Tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n)]


def central_in_class2(presentation: Presentation, name: str) -> bool:
    """Whether the named generator is central in the class-2 nilpotent quotient.

    Works in the free class-2 group: the relators contribute their commutator
    parts plus all wedges of their exponent vectors with the generators; the
    generator is central iff every basic commutator with it lies in that
    integer lattice.
    """
    n = presentation.num_generators
    k = presentation.generator_index(name)
    basis = _wedge_basis(n)
    basis_pos = {pair: t for t, pair in enumerate(basis)}

    def wedge(a: Sequence[int], b: Sequence[int]) -> List[int]:
        out = [0] * len(basis)
        for (i, j), t in basis_pos.items():
            out[t] = a[i] * b[j] - a[j] * b[i]
        return out

    columns: List[List[int]] = []
    for relator in presentation.relators:
        sums, comm = _collect_class2(relator, n)
        col = [0] * len(basis)
        for (i, j), v in comm.items():
            col[basis_pos[(i, j)]] = v
        columns.append(col)
        for g in range(n):
            unit = [0] * n
            unit[g] = 1
            columns.append(wedge(sums, unit))
    columns = [c for c in columns if any(c)]

    for i in range(n):
        if i == k:
            continue
        pair = (min(i, k), max(i, k))
        target = [0] * len(basis)
        target[basis_pos[pair]] = 1
        if not _in_lattice(columns, target):
            return False
    return True


def _in_lattice(columns: List[List[int]], target: List[int]) -> bool:
    """Solve ``M x = target`` over the integers, columns spanning the lattice."""
    if not columns:
        return not any(target)
    rows = len(target)
    matrix = [[col[r] for col in columns] for r in range(rows)]
    D, U, _ = smith_normal_form(matrix)
    lifted = [sum(U[r][s] * target[s] for s in range(rows)) for r in range(rows)]
    ncols = len(columns)
    for r in range(rows):
        d = D[r][r] if r < min(rows, ncols) else 0
        if d == 0:
            if lifted[r] != 0:
                return False
        elif lifted[r] % d != 0:
            return False
    return True
