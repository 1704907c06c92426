"""Edge-path presentations of the fundamental group and Tietze simplification.

Words in a free group are deques of non-zero integers; ``-g`` is the inverse
of generator ``g``.
"""

import logging
from collections import deque
from typing import Dict, Iterable, List, Optional, Set

import networkx as nx

from .errors import InvariantViolation

logger = logging.getLogger(__name__)


class Word(deque):
    """A freely reduced word."""

    def __init__(self, word: Iterable[int] = ()):
        deque.__init__(self)
        for x in word:
            if self and self[-1] == -x:
                self.pop()
            else:
                self.append(x)

    def __mul__(self, other: "Word") -> "Word":
        return Word(list(self) + list(other))

    def __invert__(self) -> "Word":
        return Word(-x for x in reversed(self))

    @property
    def letters(self) -> Set[int]:
        return {abs(x) for x in self}


class CyclicWord(Word):
    """A word up to cyclic permutation, kept cyclically reduced."""

    def __init__(self, word: Iterable[int] = ()):
        Word.__init__(self, word)
        while len(self) > 1 and self[0] == -self[-1]:
            self.popleft()
            self.pop()

    def spun(self, start: int) -> "CyclicWord":
        """The rotation beginning at position ``start``."""
        items = list(self)
        return CyclicWord(items[start:] + items[:start])


class Presentation:
    """Generators and cyclically reduced relators.

    ``simplify`` runs bounded Tietze passes; it can prove triviality but a
    non-trivial leftover proves nothing.
    """

    def __init__(self, relators: Iterable[Iterable[int]], generators: Iterable[int] = ()):
        self.generators: Set[int] = set(generators)
        self.relators: List[CyclicWord] = []
        for r in relators:
            w = CyclicWord(r)
            self.generators.update(w.letters)
            if w:
                self.relators.append(w)

    def __repr__(self) -> str:
        return f"Presentation(generators={sorted(self.generators)}, relators={[list(r) for r in self.relators]})"

    def __len__(self) -> int:
        return sum(len(r) for r in self.relators)

    @property
    def is_trivial(self) -> bool:
        return not self.generators

    def _substitute(self, g: int, replacement: Word, max_word: int) -> bool:
        """Replace ``g`` everywhere; refuses (returns False) if a relator grows past max_word."""
        inverse = ~replacement
        new_relators = []
        for r in self.relators:
            if g not in r.letters:
                new_relators.append(r)
                continue
            out: List[int] = []
            for x in r:
                if x == g:
                    out.extend(replacement)
                elif x == -g:
                    out.extend(inverse)
                else:
                    out.append(x)
            w = CyclicWord(out)
            if len(w) > max_word:
                return False
            if w:
                new_relators.append(w)
        self.relators = new_relators
        self.generators.discard(g)
        return True

    def _eliminate_once(self, max_word: int) -> bool:
        for idx in sorted(range(len(self.relators)), key=lambda i: len(self.relators[i])):
            r = self.relators[idx]
            counts: Dict[int, int] = {}
            for x in r:
                counts[abs(x)] = counts.get(abs(x), 0) + 1
            for g in sorted(g for g, c in counts.items() if c == 1):
                pos = next(i for i, x in enumerate(r) if abs(x) == g)
                rotated = r.spun(pos)
                exponent = rotated[0]
                rest = Word(list(rotated)[1:])
                # g^e * rest = 1
                replacement = ~rest if exponent > 0 else rest
                others = Presentation([], self.generators)
                others.relators = self.relators[:idx] + self.relators[idx + 1:]
                if others._substitute(g, replacement, max_word):
                    self.relators = others.relators
                    self.generators = others.generators
                    return True
        return False

    def simplify(self, passes: int = 50, max_word: int = 400) -> bool:
        """Eliminate generators with Tietze moves; True if the group became trivial."""
        for n in range(passes):
            self.relators = [r for r in self.relators if r]
            progress = False
            while self._eliminate_once(max_word):
                progress = True
                if self.is_trivial:
                    break
            logger.debug("Tietze pass %d: %d generators, %d relators, length %d",
                         n, len(self.generators), len(self.relators), len(self))
            if self.is_trivial or not progress:
                break
        return self.is_trivial


def _edge_ends(column: Dict[int, int]):
    tail = head = None
    for v, c in column.items():
        if c == 1:
            head = v
        elif c == -1:
            tail = v
    if tail is None or head is None or len(column) != 2:
        raise InvariantViolation(f"1-cell boundary {column} is not head minus tail")
    return tail, head


def _boundary_walk(boundary: Dict[int, int], ends: List[tuple]) -> Optional[List[int]]:
    """Closed walk around a 2-cell as signed edge ids (1-based), or None if not a loop."""
    pending = dict(boundary)
    if not pending:
        return []
    steps = []
    for e, s in pending.items():
        if s not in (1, -1):
            return None
        tail, head = ends[e]
        steps.append((e, s, tail, head) if s == 1 else (e, s, head, tail))
    walk = [steps.pop(0)]
    while steps:
        current = walk[-1][3]
        nxt = next((i for i, st in enumerate(steps) if st[2] == current), None)
        if nxt is None:
            return None
        walk.append(steps.pop(nxt))
    if walk[-1][3] != walk[0][2]:
        return None
    return [(e + 1) * s for e, s, _, _ in walk]


def edge_path_presentation(c) -> Presentation:
    """Presentation of the edge-path group of the 2-skeleton of a cellular chain complex.

    Every 1-cell must have boundary ``head - tail`` and every 2-cell boundary
    must be a single closed edge loop, as for Hom complexes and simplicial
    complexes. Generators are the edges outside a spanning forest.
    """
    n0 = c.rank(0)
    ends = [_edge_ends(col) for col in c.boundaries[1]] if c.rank(1) else []
    graph = nx.MultiGraph()
    graph.add_nodes_from(range(n0))
    for e, (tail, head) in enumerate(ends):
        graph.add_edge(tail, head, key=e)
    tree_edges = {k for _, _, k in nx.minimum_spanning_edges(graph, algorithm="kruskal",
                                                               keys=True, data=False)}
    generators = [e + 1 for e in range(len(ends)) if e not in tree_edges]
    relators = []
    for col in (c.boundaries[2] if c.rank(2) else []):
        walk = _boundary_walk(col, ends)
        if walk is None:
            raise InvariantViolation(f"2-cell boundary {col} is not a closed edge loop")
        relators.append([x for x in walk if abs(x) - 1 not in tree_edges])
    p = Presentation(relators, generators)
    logger.info("Edge-path presentation: %d generators, %d relators",
                len(p.generators), len(p.relators))
    return p
