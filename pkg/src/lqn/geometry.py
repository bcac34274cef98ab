"""Slope representations over F_q x F_q.

Points of ``F_q x F_q`` are indexed ``a*q + b``; in a doubled structure the
mirror copy is offset by ``q**2``.  A :class:`LabelMatrix` holds one atom
index per ordered pair of points.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import IO, Dict, Iterator, NamedTuple, Optional

import numpy as np

from .algebra import IDENTITY, Atom, AtomStructure, a
from .gf import Field, NotAPrimePower, build_field

PRIMARY, MIRROR = 0, 1
FORMAT_TAG = "LQN v1"


class SamePoint(ValueError):
    pass


class RepresentationFormatError(ValueError):
    """Malformed representation file; ``line`` is 1-based."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class Point(NamedTuple):
    copy: int
    a: int
    b: int


def point_index(q: int, p: Point) -> int:
    return p.copy * q * q + p.a * q + p.b


def index_point(q: int, idx: int) -> Point:
    copy, rest = divmod(idx, q * q)
    return Point(copy, *divmod(rest, q))


def slope_label(f: Field, p1: Point, p2: Point) -> Atom:
    """``a_i`` for slope i between two points of the same copy, ``a_q`` if vertical."""
    if p1.copy != p2.copy:
        raise ValueError("points lie in different copies")
    if (p1.a, p1.b) == (p2.a, p2.b):
        raise SamePoint(f"{p1} and {p2} coincide")
    if p1.a == p2.a:
        return a(f.q)
    return a(f.div(f.sub(p2.b, p1.b), f.sub(p2.a, p1.a)))


def slope_matrix(f: Field) -> np.ndarray:
    """``(q*q, q*q)`` array of slope indices (q for vertical, -1 on the diagonal)."""
    q = f.q
    idx = np.arange(q * q)
    xs, ys = idx // q, idx % q
    dx = f.add_table[xs[None, :], f.neg_table[xs][:, None]]
    dy = f.add_table[ys[None, :], f.neg_table[ys][:, None]]
    out = f.mul_table[dy, f.inv_table[dx]].astype(np.int32)
    out[dx == 0] = q
    np.fill_diagonal(out, -1)
    return out


@dataclass
class LabelMatrix:
    """Symmetric V x V array of atom indices (structure of L(q, n)).

    ``labels[x, y]`` indexes into ``AtomStructure(q, n).atoms``; the diagonal
    holds the identity.  Per-atom neighbour bitsets are built lazily and
    dropped whenever :meth:`touch` is called after a mutation.
    """

    q: int
    n: int
    labels: np.ndarray
    _bits: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @property
    def V(self) -> int:
        return self.labels.shape[0]

    @property
    def doubled(self) -> bool:
        return self.V == 2 * self.q * self.q

    @property
    def atom_count(self) -> int:
        return self.q + self.n + 2

    def structure(self) -> AtomStructure:
        return AtomStructure(self.q, self.n)

    def copy(self) -> "LabelMatrix":
        return LabelMatrix(self.q, self.n, self.labels.copy())

    def touch(self) -> None:
        self._bits = None

    def label(self, x: int, y: int) -> Atom:
        return self.structure().atoms[int(self.labels[x, y])]

    def neighbor_bits(self) -> np.ndarray:
        """Packed bitsets: ``bits[atom, x]`` has bit z set iff ``labels[x, z] == atom``."""
        if self._bits is None:
            self._bits = np.stack(
                [np.packbits(self.labels == c, axis=1) for c in range(self.atom_count)]
            )
        return self._bits

    def has_witness(self, x: int, y: int, d: int, e: int) -> bool:
        """Is there a z with ``labels[x, z] == d`` and ``labels[z, y] == e``?"""
        bits = self.neighbor_bits()
        return bool(np.any(bits[d, x] & bits[e, y]))

    def witnesses(self, x: int, y: int, d: int, e: int) -> np.ndarray:
        bits = self.neighbor_bits()
        return np.flatnonzero(np.unpackbits(bits[d, x] & bits[e, y], count=self.V))

    def check_shape(self) -> None:
        """Raise ValueError unless square, identity exactly on the diagonal, indices in range."""
        lab = self.labels
        if lab.ndim != 2 or lab.shape[0] != lab.shape[1]:
            raise ValueError(f"label matrix must be square, got shape {lab.shape}")
        if np.any(np.diag(lab) != 0):
            raise ValueError("diagonal must carry the identity atom")
        off = ~np.eye(self.V, dtype=bool)
        if np.any(lab[off] == 0):
            raise ValueError("identity atom off the diagonal")
        if lab.size and int(lab.max()) >= self.atom_count:
            raise ValueError(f"atom index out of range for L({self.q},{self.n})")

    def color_block(self) -> np.ndarray:
        """t-colors ``0..n-1`` of the cross pairs, rows D and columns D'."""
        if not self.doubled:
            raise ValueError("not a doubled matrix")
        q2 = self.q * self.q
        return (self.labels[:q2, q2:].astype(np.int16) - (self.q + 2)).astype(np.int8)

    def set_color_block(self, colors: np.ndarray) -> None:
        q2 = self.q * self.q
        block = colors.astype(self.labels.dtype) + (self.q + 2)
        self.labels[:q2, q2:] = block
        self.labels[q2:, :q2] = block.T
        self.touch()


def _label_dtype(atom_count: int) -> type:
    return np.uint8 if atom_count <= 256 else np.uint16


def _require_field(q: int) -> Field:
    if q < 2:
        raise NotAPrimePower(f"{q} is not a prime power")
    return build_field(q)


def lyndon_labels(f: Field, dtype: type = np.uint8) -> np.ndarray:
    s = slope_matrix(f)
    return (s + 1).astype(dtype)  # a_i -> 1 + i, diagonal -1 -> 0


def build_lyndon(q: int) -> LabelMatrix:
    """Slope representation of L(q, 0) on q**2 points."""
    f = _require_field(q)
    return LabelMatrix(q, 0, lyndon_labels(f, _label_dtype(q + 2)))


def build_doubled(q: int) -> LabelMatrix:
    """Two disjoint slope copies with every cross pair labelled t1: L(q, 1)."""
    f = _require_field(q)
    q2 = q * q
    dtype = _label_dtype(q + 3)
    base = lyndon_labels(f, dtype)
    labels = np.full((2 * q2, 2 * q2), q + 2, dtype=dtype)
    labels[:q2, :q2] = base
    labels[q2:, q2:] = base
    return LabelMatrix(q, 1, labels)


def degree_counts(m: LabelMatrix) -> np.ndarray:
    """``out[x, c]`` = number of z with ``labels[x, z] == c``."""
    out = np.zeros((m.V, m.atom_count), dtype=np.int64)
    for c in range(m.atom_count):
        out[:, c] = (m.labels == c).sum(axis=1)
    return out


# -- file format ------------------------------------------------------------

def atom_names(q: int, n: int) -> list:
    return [IDENTITY.name] + [f"a{i}" for i in range(q + 1)] + [f"t{k}" for k in range(1, n + 1)]


def write_representation(m: LabelMatrix, out: IO[str]) -> None:
    """Stream ``m`` as text, one row per line."""
    names = np.array(atom_names(m.q, m.n), dtype=object)
    out.write(f"{FORMAT_TAG} q={m.q} n={m.n} V={m.V}\n")
    for row in m.labels:
        out.write(" ".join(names[row]))
        out.write("\n")


def _parse_header(line: str) -> Dict[str, int]:
    parts = line.split()
    if len(parts) != 5 or " ".join(parts[:2]) != FORMAT_TAG:
        raise RepresentationFormatError(f"bad header {line.strip()!r}", 1)
    fields = {}
    for p in parts[2:]:
        key, _, val = p.partition("=")
        if key not in ("q", "n", "V") or not val.isdigit():
            raise RepresentationFormatError(f"bad header field {p!r}", 1)
        fields[key] = int(val)
    if set(fields) != {"q", "n", "V"}:
        raise RepresentationFormatError("header needs q, n and V", 1)
    return fields


def read_representation(src: IO[str]) -> LabelMatrix:
    lines: Iterator[str] = iter(src)
    header = next(lines, None)
    if header is None:
        raise RepresentationFormatError("empty file", 1)
    h = _parse_header(header)
    q, n, V = h["q"], h["n"], h["V"]
    lookup = {name: i for i, name in enumerate(atom_names(q, n))}
    labels = np.zeros((V, V), dtype=_label_dtype(q + n + 2))
    for row in range(V):
        line = next(lines, None)
        lineno = row + 2
        if line is None:
            raise RepresentationFormatError(f"expected {V} rows, file ends after {row}", lineno)
        tokens = line.split()
        if len(tokens) != V:
            raise RepresentationFormatError(f"expected {V} labels, got {len(tokens)}", lineno)
        try:
            labels[row] = [lookup[tok] for tok in tokens]
        except KeyError as exc:
            raise RepresentationFormatError(f"unknown atom {exc.args[0]!r}", lineno) from None
    for extra in lines:
        if extra.strip():
            raise RepresentationFormatError("trailing data after last row", V + 2)
    m = LabelMatrix(q, n, labels)
    try:
        m.check_shape()
    except ValueError as exc:
        raise RepresentationFormatError(str(exc)) from None
    return m
