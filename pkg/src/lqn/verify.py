"""Full representation checking for label matrices.

A labelled complete graph represents the atom structure iff every triangle
is allowed by the composition table and every mandatory witness exists.
For a fixed vertex x the rows ``labels[z, :]`` are grouped by
``labels[x, z]`` and OR-reduced as atom bitmasks; the result tells, for
each y and each atom d, which atoms e occur as ``labels[z, y]`` with
``labels[x, z] == d``.  Both conditions then become mask comparisons.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .algebra import AtomStructure
from .geometry import LabelMatrix

FORBIDDEN = "ForbiddenTriangle"
MISSING = "MissingWitness"
_KIND_ORDER = {FORBIDDEN: 0, MISSING: 1}


class ShapeMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Violation:
    kind: str
    points: Tuple[int, ...]  # (x, y) or (x, y, z)
    atoms: Tuple[str, ...]  # label(x,y), then the offending/required pair

    def sort_key(self):
        return (self.points[0], self.points[1], _KIND_ORDER[self.kind], self.points[2:], self.atoms)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "points": list(self.points), "atoms": list(self.atoms)}


@dataclass
class VerifyResult:
    valid: bool
    violations: List[Violation] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid

    def to_dict(self) -> dict:
        return {"valid": self.valid, "violations": [v.to_dict() for v in self.violations]}


def _check_pair(m: LabelMatrix, s: AtomStructure) -> None:
    if (m.q, m.n) != (s.q, s.n):
        raise ShapeMismatch(f"matrix is for L({m.q},{m.n}), structure is L({s.q},{s.n})")


def _label_masks(labels: np.ndarray, words: int) -> np.ndarray:
    V = labels.shape[0]
    out = np.zeros((V, V, words), dtype=np.uint64)
    lab = labels.astype(np.int64)
    for w in range(words):
        sel = (lab >> 6) == w
        out[:, :, w] = np.where(sel, np.left_shift(np.uint64(1), (lab & 63).astype(np.uint64)), np.uint64(0))
    return out


def _bits(mask_words: np.ndarray) -> List[int]:
    out = []
    for w, word in enumerate(mask_words):
        word = int(word)
        while word:
            low = word & -word
            out.append(64 * w + low.bit_length() - 1)
            word ^= low
    return out


class _Checker:
    def __init__(self, m: LabelMatrix, s: AtomStructure):
        self.m = m
        self.s = s
        self.labels = m.labels
        size = s.size
        self.words = (size + 63) // 64
        self.masks = _label_masks(m.labels, self.words)
        allowed = s.allowed_masks()
        required = allowed.copy()
        required[:, 0, :] = 0  # d = 1' is the edge's own endpoint
        required[:, :, 0] &= ~np.uint64(1)  # e = 1' likewise
        self.allowed = allowed
        self.required = required
        self.size = size

    def row(self, x: int) -> List[Violation]:
        lab = self.labels
        V = lab.shape[0]
        row = lab[x]
        order = np.argsort(row, kind="stable")
        srt = row[order]
        starts = np.flatnonzero(np.r_[True, srt[1:] != srt[:-1]])
        seen = np.zeros((self.size, V, self.words), dtype=np.uint64)
        seen[srt[starts]] = np.bitwise_or.reduceat(self.masks[order], starts, axis=0)
        seen[0] = 0  # z = x
        seen[:, :, 0] &= ~np.uint64(1)  # z = y

        allowed = self.allowed[row].transpose(1, 0, 2)
        required = self.required[row].transpose(1, 0, 2)
        forbidden = seen & ~allowed
        missing = required & ~seen
        forbidden[:, x] = 0
        missing[:, x] = 0

        out: List[Violation] = []
        names = [atom.name for atom in self.s.atoms]
        for d, y in np.argwhere(forbidden.any(axis=2)):
            c = names[row[y]]
            for e in _bits(forbidden[d, y]):
                zs = np.flatnonzero((lab[x] == d) & (lab[:, y] == e))
                out.append(Violation(FORBIDDEN, (x, int(y), int(zs[0])), (c, names[d], names[e])))
        for d, y in np.argwhere(missing.any(axis=2)):
            c = names[row[y]]
            for e in _bits(missing[d, y]):
                out.append(Violation(MISSING, (x, int(y)), (c, names[d], names[e])))
        out.sort(key=Violation.sort_key)
        return out


def _asymmetric(m: LabelMatrix, s: AtomStructure) -> List[Violation]:
    # Atoms are self-converse: label(y, x) must equal label(x, y), i.e. the
    # degenerate triangle (x, y, x) must close through the identity.
    lab = m.labels
    bad = np.argwhere(np.triu(lab != lab.T, 1))
    names = [atom.name for atom in s.atoms]
    return [
        Violation(FORBIDDEN, (int(x), int(y), int(x)), (names[lab[x, y]], names[lab[y, x]], names[0]))
        for x, y in bad
    ]


def verify_full(
    m: LabelMatrix, s: AtomStructure, exhaustive: bool = False, threads: Optional[int] = None
) -> VerifyResult:
    """Check that ``m`` represents ``s``.

    With ``exhaustive=False`` the scan stops at the first vertex with a
    violation and returns that vertex's first violation.  Violations are
    ordered by ``(x, y)`` so results never depend on ``threads``.
    """
    _check_pair(m, s)
    m.check_shape()
    violations = _asymmetric(m, s)
    if violations and not exhaustive:
        return VerifyResult(False, violations[:1])

    checker = _Checker(m, s)
    V = m.V
    workers = max(1, threads or 1)
    if workers == 1:
        for x in range(V):
            found = checker.row(x)
            if found:
                violations.extend(found)
                if not exhaustive:
                    break
    else:
        chunk = max(1, 4 * workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for start in range(0, V, chunk):
                results = list(pool.map(checker.row, range(start, min(V, start + chunk))))
                for found in results:
                    violations.extend(found)
                if violations and not exhaustive:
                    break
    violations.sort(key=Violation.sort_key)
    if not exhaustive:
        violations = violations[:1]
    return VerifyResult(not violations, violations)


def verify_conditions_only(m: LabelMatrix, s: AtomStructure) -> bool:
    """Fast check of the t-witness conditions only (see ``coloring.find_failures``)."""
    from .coloring import find_failures

    _check_pair(m, s)
    return not find_failures(m, s, first_only=True)
