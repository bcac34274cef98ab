"""Atom structure of the symmetric integral relation algebra L(q, n).

Atoms are kept in a fixed order: ``1'``, ``a0 .. aq``, ``t1 .. tn``.  Index 0
is the identity, ``a_i`` sits at ``1 + i`` and ``t_k`` at ``q + 1 + k``.
Composition is stored as one Python-int bitmask per ordered atom pair, so a
membership test is a single shift and AND.
"""

from __future__ import annotations

import itertools
import json
import re
from typing import Dict, List, NamedTuple, Optional, Tuple

import numpy as np

IDENTITY_NAME = "1'"
_NAME_RE = re.compile(r"^(?:(1')|a(\d+)|t(\d+))$")


class Atom(NamedTuple):
    kind: str  # "id", "a" or "t"
    index: Optional[int] = None

    @property
    def name(self) -> str:
        if self.kind == "id":
            return IDENTITY_NAME
        return f"{self.kind}{self.index}"

    def __str__(self) -> str:
        return self.name

    @classmethod
    def parse(cls, name: str) -> "Atom":
        m = _NAME_RE.match(name)
        if not m:
            raise ValueError(f"not an atom name: {name!r}")
        if m.group(1):
            return IDENTITY
        if m.group(2) is not None:
            return cls("a", int(m.group(2)))
        return cls("t", int(m.group(3)))


IDENTITY = Atom("id")


def a(i: int) -> Atom:
    return Atom("a", i)


def t(k: int) -> Atom:
    return Atom("t", k)


class AtomStructure:
    """Composition table of L(q, n) on atoms.

    ``comp[x][y]`` is a bitmask over atom indices.  All atoms are
    self-converse, so the table is symmetric.
    """

    def __init__(self, q: int, n: int):
        if q < 1 or n < 0:
            raise ValueError(f"need q >= 1 and n >= 0, got q={q}, n={n}")
        self.q = q
        self.n = n
        self.atoms: List[Atom] = [IDENTITY] + [a(i) for i in range(q + 1)] + [t(k) for k in range(1, n + 1)]
        self._index: Dict[Atom, int] = {x: i for i, x in enumerate(self.atoms)}
        self.comp: List[List[int]] = self._table()

    # -- layout -------------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.atoms)

    def a_index(self, i: int) -> int:
        return 1 + i

    def t_index(self, k: int) -> int:
        return self.q + 1 + k

    def index(self, x: Atom) -> int:
        try:
            return self._index[x]
        except KeyError:
            raise ValueError(f"{x} is not an atom of L({self.q},{self.n})") from None

    def is_a(self, idx: int) -> bool:
        return 1 <= idx <= self.q + 1

    def is_t(self, idx: int) -> bool:
        return idx >= self.q + 2

    @property
    def a_mask(self) -> int:
        return ((1 << (self.q + 1)) - 1) << 1

    @property
    def t_mask(self) -> int:
        return ((1 << self.n) - 1) << (self.q + 2)

    def _table(self) -> List[List[int]]:
        A, T = self.a_mask, self.t_mask
        size = self.size
        comp = [[0] * size for _ in range(size)]
        for x in range(size):
            comp[0][x] = comp[x][0] = 1 << x
        for x in range(1, size):
            for y in range(1, size):
                if self.is_a(x) and self.is_a(y):
                    comp[x][y] = (1 | (1 << x)) if x == y else A & ~((1 << x) | (1 << y))
                elif self.is_t(x) and self.is_t(y):
                    comp[x][y] = (1 | A) if x == y else A
                else:
                    comp[x][y] = T
        return comp

    # -- queries ------------------------------------------------------------

    def compose(self, x: Atom, y: Atom) -> List[Atom]:
        mask = self.comp[self.index(x)][self.index(y)]
        return [self.atoms[i] for i in range(self.size) if mask >> i & 1]

    def contains(self, x: Atom, y: Atom, z: Atom) -> bool:
        """True iff ``z`` is in ``x ; y``."""
        return bool(self.comp[self.index(x)][self.index(y)] >> self.index(z) & 1)

    def witness_pairs(self, c: int) -> List[Tuple[int, int]]:
        """Index form of :func:`mandatory_witness_pairs`, sorted."""
        return [(d, e) for d in range(self.size) for e in range(self.size) if self.comp[d][e] >> c & 1]

    def allowed_masks(self) -> np.ndarray:
        """``out[c, d]`` = bitmask of atoms ``e`` with ``c`` in ``d ; e``.

        Shape ``(size, size, words)`` of uint64, little-endian words.
        """
        size = self.size
        words = (size + 63) // 64
        out = np.zeros((size, size, words), dtype=np.uint64)
        for c in range(size):
            for d in range(size):
                mask = 0
                for e in range(size):
                    if self.comp[d][e] >> c & 1:
                        mask |= 1 << e
                for w in range(words):
                    out[c, d, w] = (mask >> (64 * w)) & 0xFFFFFFFFFFFFFFFF
        return out

    def to_json(self) -> str:
        comp = {}
        for i, j in itertools.combinations_with_replacement(range(self.size), 2):
            key = f"{self.atoms[i].name},{self.atoms[j].name}"
            comp[key] = [self.atoms[z].name for z in range(self.size) if self.comp[i][j] >> z & 1]
        return json.dumps({"q": self.q, "n": self.n, "comp": comp}, indent=1)

    def __repr__(self) -> str:
        return f"AtomStructure(q={self.q}, n={self.n})"


def build_atom_structure(q: int, n: int) -> AtomStructure:
    return AtomStructure(q, n)


def composition_contains(s: AtomStructure, x: Atom, y: Atom, z: Atom) -> bool:
    return s.contains(x, y, z)


def mandatory_witness_pairs(s: AtomStructure, c: Atom) -> List[Tuple[Atom, Atom]]:
    """All ordered pairs ``(d, e)`` with ``c`` in ``d ; e``.

    Pairs involving the identity are included; a checker skips them since
    they are witnessed by the edge's own endpoints.
    """
    if c == IDENTITY:
        raise ValueError("mandatory witnesses are defined for diversity atoms only")
    return [(s.atoms[d], s.atoms[e]) for d, e in s.witness_pairs(s.index(c))]


def is_associative(s: AtomStructure) -> bool:
    """Exhaustive associativity of the complex composition on atoms.

    Cubic in the atom count with a bitmask inner loop; meant for tests on
    small tables.
    """
    size = s.size

    def comp_mask(mask: int, y: int) -> int:
        out = 0
        for x in range(size):
            if mask >> x & 1:
                out |= s.comp[x][y]
        return out

    def comp_mask_left(x: int, mask: int) -> int:
        out = 0
        for y in range(size):
            if mask >> y & 1:
                out |= s.comp[x][y]
        return out

    for x in range(size):
        for y in range(size):
            for z in range(size):
                if comp_mask(s.comp[x][y], z) != comp_mask_left(x, s.comp[y][z]):
                    return False
    return True
