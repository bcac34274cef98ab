"""Random t-colorings of the doubled slope structure and resampling search.

The doubled structure has point sets D and D' of size q**2 each.  Only the
cross pairs (t-edges) are random; their colors live in ``C[x, y]`` for
``x`` in D and ``y`` in D' (values ``0..n-1`` meaning ``t1..tn``).

An edge *fails* when one of its t-witness needs is unmet:

* a-edge ``(x, y)`` in one copy, need ``(t_i, t_j)``: no z in the other copy
  with ``C(x, z) = i`` and ``C(y, z) = j``;
* t-edge ``(x, y)``, need ``(a_k, t_j)``: no z on the slope-k line through x
  with ``C(z, y) = j``; need ``(t_j, a_k)``: no z on the slope-k line
  through y with ``C(x, z) = j``.

The search redraws every t-edge at both endpoints of the first failing edge
until nothing fails.  Edge order is the global ``(u, v)`` index order with
``u < v``; needs within an edge follow the sorted ``(d, e)`` atom order.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from typing import List, Optional, Tuple

import numba
import numpy as np

from .algebra import Atom, AtomStructure
from .geometry import LabelMatrix, Point, build_doubled, index_point

ATT = "Att"
TATTA = "Tatta"

SUCCESS = "Success"
EXHAUSTED = "Exhausted"


class InfeasibleWarning(UserWarning):
    """2n > q: L(q, n) has no representation, so the search cannot succeed."""


class StaleFailure(ValueError):
    pass


# -- random streams ---------------------------------------------------------

def streams(seed: int) -> Tuple[np.random.Generator, np.random.Generator]:
    """PCG64 generators for the initial coloring and for resampling.

    Both come from ``SeedSequence(seed).spawn(2)``, so the two phases never
    share draws and a run is reproducible from ``seed`` alone.
    """
    if seed < 0:
        raise ValueError("seed must be non-negative")
    init, resample = np.random.SeedSequence(seed).spawn(2)
    return np.random.Generator(np.random.PCG64(init)), np.random.Generator(np.random.PCG64(resample))


# -- layout -----------------------------------------------------------------

class _Layout:
    """Arrays the kernels need, extracted from a doubled label matrix."""

    def __init__(self, m: LabelMatrix):
        if not m.doubled:
            raise ValueError(f"expected a doubled matrix on {2 * m.q * m.q} points, got V={m.V}")
        q, n = m.q, m.n
        if n < 1:
            raise ValueError("a doubled matrix needs n >= 1")
        q2 = q * q
        lab = m.labels
        self.q, self.n, self.q2 = q, n, q2
        cross = lab[:q2, q2:]
        if np.any(cross < q + 2):
            raise ValueError("cross-copy pairs must carry t-atoms")
        self.C = np.ascontiguousarray(cross.astype(np.int16) - (q + 2)).astype(np.int8)
        self.CT = np.ascontiguousarray(self.C.T)
        self.slopeD, self.nbrD, self.degD = self._lines(lab[:q2, :q2])
        self.slopeP, self.nbrP, self.degP = self._lines(lab[q2:, q2:])

    def _lines(self, block: np.ndarray):
        q, q2 = self.q, self.q2
        slope = block.astype(np.int32) - 1
        off = ~np.eye(q2, dtype=bool)
        if np.any((slope[off] < 0) | (slope[off] > q)):
            raise ValueError("same-copy pairs must carry a-atoms")
        deg = np.zeros((q + 1, q2), dtype=np.int32)
        for k in range(q + 1):
            deg[k] = (slope == k).sum(axis=1)
        width = max(1, int(deg.max()))
        nbr = np.full((q + 1, q2, width), -1, dtype=np.int32)
        cols = np.arange(width)[None, :]
        for k in range(q + 1):
            # stable argsort puts the slope-k columns first, in index order
            first = np.argsort(slope != k, axis=1, kind="stable")[:, :width]
            nbr[k] = np.where(cols < deg[k][:, None], first, -1)
        return slope, nbr, deg

    def args(self):
        return (self.C, self.CT, self.nbrD, self.degD, self.nbrP, self.degP, self.q, self.n)


# -- kernels ----------------------------------------------------------------

@numba.njit(cache=True, nogil=True)
def _att_seen(rx, ry, n, seen):
    """Mark color pairs (rx[z], ry[z]); returns how many of n*n stayed unseen."""
    seen[:] = False
    remaining = n * n
    for z in range(rx.shape[0]):
        p = rx[z] * n + ry[z]
        if not seen[p]:
            seen[p] = True
            remaining -= 1
            if remaining == 0:
                break
    return remaining


@numba.njit(cache=True, nogil=True)
def _line_seen(colors_along, nbr_row, deg, n, seen):
    """Mark colors colors_along[z] for z on one line; returns unseen count."""
    seen[:n] = False
    remaining = n
    for m in range(deg):
        c = colors_along[nbr_row[m]]
        if not seen[c]:
            seen[c] = True
            remaining -= 1
            if remaining == 0:
                break
    return remaining


@numba.njit(cache=True, nogil=True)
def _tat0_fails(C, CT, nbrD, degD, n, x, y, k, seen):
    return _line_seen(CT[y], nbrD[k, x], degD[k, x], n, seen) > 0


@numba.njit(cache=True, nogil=True)
def _tat1_fails(C, CT, nbrP, degP, n, x, y, k, seen):
    return _line_seen(C[x], nbrP[k, y], degP[k, y], n, seen) > 0


@numba.njit(cache=True, nogil=True)
def _emit_edge(u, v, C, CT, nbrD, degD, nbrP, degP, q, n, out, count, limit, seen, seen_t):
    """Append unmet needs of edge (u, v), u < v, as rows (u, v, d, e).

    Stops once ``count`` reaches ``limit``; returns the new count.  Rows past
    ``out.shape[0]`` are counted but not stored.
    """
    q2 = q * q
    t0 = q + 2
    if v < q2 or u >= q2:
        if u < q2:
            rem = _att_seen(C[u], C[v], n, seen)
        else:
            rem = _att_seen(CT[u - q2], CT[v - q2], n, seen)
        if rem == 0:
            return count
        for p in range(n * n):
            if not seen[p]:
                if count < out.shape[0]:
                    out[count, 0] = u
                    out[count, 1] = v
                    out[count, 2] = t0 + p // n
                    out[count, 3] = t0 + p % n
                count += 1
                if count >= limit:
                    return count
        return count

    x = u
    y = v - q2
    # (a_k, t_j): k-major
    for k in range(q + 1):
        if _line_seen(CT[y], nbrD[k, x], degD[k, x], n, seen) > 0:
            for j in range(n):
                if not seen[j]:
                    if count < out.shape[0]:
                        out[count, 0] = u
                        out[count, 1] = v
                        out[count, 2] = 1 + k
                        out[count, 3] = t0 + j
                    count += 1
                    if count >= limit:
                        return count
    # (t_j, a_k): j-major, so collect all k first
    any_missing = False
    for k in range(q + 1):
        seen_t[k, :n] = True
        if _line_seen(C[x], nbrP[k, y], degP[k, y], n, seen) > 0:
            any_missing = True
            for j in range(n):
                seen_t[k, j] = seen[j]
    if any_missing:
        for j in range(n):
            for k in range(q + 1):
                if not seen_t[k, j]:
                    if count < out.shape[0]:
                        out[count, 0] = u
                        out[count, 1] = v
                        out[count, 2] = t0 + j
                        out[count, 3] = 1 + k
                    count += 1
                    if count >= limit:
                        return count
    return count


@numba.njit(cache=True, nogil=True)
def _scan(C, CT, nbrD, degD, nbrP, degP, q, n, out, limit):
    """Unmet needs over all edges in canonical order, up to ``limit`` rows.

    Returns ``(total, att_total)``.
    """
    q2 = q * q
    V = 2 * q2
    seen = np.zeros(max(n * n, n), dtype=np.bool_)
    seen_t = np.zeros((q + 1, n), dtype=np.bool_)
    count = 0
    att = 0
    for u in range(V):
        for v in range(u + 1, V):
            before = count
            count = _emit_edge(u, v, C, CT, nbrD, degD, nbrP, degP, q, n, out, count, limit, seen, seen_t)
            if v < q2 or u >= q2:
                att += count - before
            if count >= limit:
                return count, att
    return count, att


@numba.njit(cache=True, nogil=True)
def _edge_fails(u, v, C, CT, nbrD, degD, nbrP, degP, q, n, seen):
    q2 = q * q
    if v < q2:
        return _att_seen(C[u], C[v], n, seen) > 0
    if u >= q2:
        return _att_seen(CT[u - q2], CT[v - q2], n, seen) > 0
    x = u
    y = v - q2
    for k in range(q + 1):
        if _line_seen(CT[y], nbrD[k, x], degD[k, x], n, seen) > 0:
            return True
    for k in range(q + 1):
        if _line_seen(C[x], nbrP[k, y], degP[k, y], n, seen) > 0:
            return True
    return False


@numba.njit(cache=True, nogil=True)
def _first_failing_edge(C, CT, nbrD, degD, nbrP, degP, q, n):
    q2 = q * q
    V = 2 * q2
    seen = np.zeros(max(n * n, n), dtype=np.bool_)
    for u in range(V):
        for v in range(u + 1, V):
            if _edge_fails(u, v, C, CT, nbrD, degD, nbrP, degP, q, n, seen):
                return u, v
    return -1, -1


@numba.njit(cache=True, nogil=True)
def _resample(C, CT, u, v, q2, n, rng):
    """Redraw every t-edge incident to u or v, row-major over (x, y)."""
    drawn = 0
    if v < q2:
        for x in (u, v):
            for y in range(q2):
                c = rng.integers(0, n)
                C[x, y] = c
                CT[y, x] = c
                drawn += 1
    elif u >= q2:
        c1 = u - q2
        c2 = v - q2
        for x in range(q2):
            for y in (c1, c2):
                c = rng.integers(0, n)
                C[x, y] = c
                CT[y, x] = c
                drawn += 1
    else:
        x0 = u
        y0 = v - q2
        for x in range(q2):
            if x == x0:
                for y in range(q2):
                    c = rng.integers(0, n)
                    C[x, y] = c
                    CT[y, x] = c
                    drawn += 1
            else:
                c = rng.integers(0, n)
                C[x, y0] = c
                CT[y0, x] = c
                drawn += 1
    return drawn


# Incremental failure flags.
#   attD[x, y], attP[x, y] (x < y): the a-edge fails some (t_i, t_j) need.
#   tat[x, y, o, k]: t-edge (x, y') misses some t-color on the slope-k line
#   through x (o = 0) or through y' (o = 1).
#   rows[u]: flags set on edges whose smaller endpoint is global vertex u.

@numba.njit(cache=True, nogil=True)
def _set_att(flags, rows, offset, x, y, val, total):
    if flags[x, y] != val:
        flags[x, y] = val
        if val:
            rows[offset + x] += 1
            total[0] += 1
        else:
            rows[offset + x] -= 1
            total[0] -= 1


@numba.njit(cache=True, nogil=True)
def _set_tat(tat, rows, x, y, o, k, val, total):
    if tat[x, y, o, k] != val:
        tat[x, y, o, k] = val
        if val:
            rows[x] += 1
            total[0] += 1
        else:
            rows[x] -= 1
            total[0] -= 1


@numba.njit(cache=True, nogil=True)
def _recheck_attD(C, n, attD, rows, total, x, y, seen):
    a, b = (x, y) if x < y else (y, x)
    _set_att(attD, rows, 0, a, b, _att_seen(C[a], C[b], n, seen) > 0, total)


@numba.njit(cache=True, nogil=True)
def _recheck_attP(CT, n, q2, attP, rows, total, x, y, seen):
    a, b = (x, y) if x < y else (y, x)
    _set_att(attP, rows, q2, a, b, _att_seen(CT[a], CT[b], n, seen) > 0, total)


@numba.njit(cache=True, nogil=True)
def _init_flags(C, CT, nbrD, degD, nbrP, degP, q, n, attD, attP, tat, rows, total):
    q2 = q * q
    seen = np.zeros(max(n * n, n), dtype=np.bool_)
    for x in range(q2):
        for y in range(x + 1, q2):
            _recheck_attD(C, n, attD, rows, total, x, y, seen)
            _recheck_attP(CT, n, q2, attP, rows, total, x, y, seen)
    for x in range(q2):
        for y in range(q2):
            for k in range(q + 1):
                _set_tat(tat, rows, x, y, 0, k, _tat0_fails(C, CT, nbrD, degD, n, x, y, k, seen), total)
                _set_tat(tat, rows, x, y, 1, k, _tat1_fails(C, CT, nbrP, degP, n, x, y, k, seen), total)


@numba.njit(cache=True, nogil=True)
def _update_flags(s, C, CT, nbrD, degD, nbrP, degP, slopeD, slopeP, q, n, attD, attP, tat, rows, total, seen):
    """Recheck every flag that can change when all t-edges at vertex s change.

    Returns 1 if s is in D (all D' a-edges need rechecking), 2 if in D'.
    """
    q2 = q * q
    if s < q2:
        x = s
        for y in range(q2):
            if y != x:
                _recheck_attD(C, n, attD, rows, total, x, y, seen)
        for y in range(q2):
            for k in range(q + 1):
                _set_tat(tat, rows, x, y, 0, k, _tat0_fails(C, CT, nbrD, degD, n, x, y, k, seen), total)
                _set_tat(tat, rows, x, y, 1, k, _tat1_fails(C, CT, nbrP, degP, n, x, y, k, seen), total)
        for x2 in range(q2):
            if x2 != x:
                k = slopeD[x2, x]
                for y in range(q2):
                    _set_tat(tat, rows, x2, y, 0, k, _tat0_fails(C, CT, nbrD, degD, n, x2, y, k, seen), total)
        return 1
    y = s - q2
    for y2 in range(q2):
        if y2 != y:
            _recheck_attP(CT, n, q2, attP, rows, total, y, y2, seen)
    for x in range(q2):
        for k in range(q + 1):
            _set_tat(tat, rows, x, y, 0, k, _tat0_fails(C, CT, nbrD, degD, n, x, y, k, seen), total)
            _set_tat(tat, rows, x, y, 1, k, _tat1_fails(C, CT, nbrP, degP, n, x, y, k, seen), total)
    for y2 in range(q2):
        if y2 != y:
            k = slopeP[y2, y]
            for x in range(q2):
                _set_tat(tat, rows, x, y2, 1, k, _tat1_fails(C, CT, nbrP, degP, n, x, y2, k, seen), total)
    return 2


@numba.njit(cache=True, nogil=True)
def _first_flagged(q, attD, attP, tat, rows):
    q2 = q * q
    for u in range(2 * q2):
        if rows[u] == 0:
            continue
        if u < q2:
            for v in range(u + 1, q2):
                if attD[u, v]:
                    return u, v
            for y in range(q2):
                for o in range(2):
                    for k in range(q + 1):
                        if tat[u, y, o, k]:
                            return u, q2 + y
        else:
            x = u - q2
            for y in range(x + 1, q2):
                if attP[x, y]:
                    return u, q2 + y
    return -1, -1


@numba.njit(cache=True, nogil=True)
def _search(C, CT, nbrD, degD, nbrP, degP, slopeD, slopeP, q, n, rng, max_rounds, incremental):
    """Resample until no edge fails or ``max_rounds`` resamples were spent.

    Returns ``(rounds, redrawn, success)``.
    """
    q2 = q * q
    rounds = 0
    redrawn = 0
    dim = q2 if incremental else 1
    attD = np.zeros((dim, dim), dtype=np.bool_)
    attP = np.zeros((dim, dim), dtype=np.bool_)
    tat = np.zeros((dim, dim, 2, q + 1), dtype=np.bool_)
    rows = np.zeros(2 * dim, dtype=np.int64)
    total = np.zeros(1, dtype=np.int64)
    seen = np.zeros(max(n * n, n), dtype=np.bool_)
    if incremental:
        _init_flags(C, CT, nbrD, degD, nbrP, degP, q, n, attD, attP, tat, rows, total)
    while True:
        if incremental:
            if total[0] == 0:
                return rounds, redrawn, True
            u, v = _first_flagged(q, attD, attP, tat, rows)
        else:
            u, v = _first_failing_edge(C, CT, nbrD, degD, nbrP, degP, q, n)
            if u < 0:
                return rounds, redrawn, True
        if rounds >= max_rounds:
            return rounds, redrawn, False
        redrawn += _resample(C, CT, u, v, q2, n, rng)
        rounds += 1
        if incremental:
            need_attP = False
            need_attD = False
            for s in (u, v):
                side = _update_flags(s, C, CT, nbrD, degD, nbrP, degP, slopeD, slopeP, q, n,
                                     attD, attP, tat, rows, total, seen)
                if side == 1:
                    need_attP = True
                else:
                    need_attD = True
            if need_attP:
                for x in range(q2):
                    for y in range(x + 1, q2):
                        _recheck_attP(CT, n, q2, attP, rows, total, x, y, seen)
            if need_attD:
                for x in range(q2):
                    for y in range(x + 1, q2):
                        _recheck_attD(C, n, attD, rows, total, x, y, seen)


# -- public API -------------------------------------------------------------

@dataclass(frozen=True)
class FailureRecord:
    """One unmet need ``(d, e)`` of edge ``(u, v)``."""

    q: int
    u: int
    v: int
    condition: str
    need: Tuple[Atom, Atom]

    @property
    def edge(self) -> Tuple[Point, Point]:
        return index_point(self.q, self.u), index_point(self.q, self.v)


@dataclass
class ColoringRun:
    q: int
    n: int
    seed: int
    max_rounds: int
    rounds_used: int = 0  # resample steps taken
    resample_count: int = 0  # t-edges redrawn over all steps
    outcome: str = EXHAUSTED
    infeasible: bool = False

    def to_dict(self) -> dict:
        d = asdict(self)
        d["rounds"] = d.pop("rounds_used")
        d["resamples"] = d.pop("resample_count")
        return d


def _with_n(m: LabelMatrix, n: int) -> LabelMatrix:
    dtype = np.uint8 if m.q + n + 2 <= 256 else np.uint16
    return LabelMatrix(m.q, n, m.labels.astype(dtype, copy=True))


def randomize_t_colors(m: LabelMatrix, n: int, seed: int) -> LabelMatrix:
    """Color every cross pair uniformly from ``t1..tn``; a-labels untouched."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if not m.doubled:
        raise ValueError("randomize_t_colors needs a doubled matrix")
    q2 = m.q * m.q
    init, _ = streams(seed)
    out = _with_n(m, n)
    out.set_color_block(init.integers(0, n, size=(q2, q2)).astype(np.int8))
    return out


def _records(rows: np.ndarray, s: AtomStructure, q: int) -> List[FailureRecord]:
    q2 = q * q
    out = []
    for u, v, d, e in rows:
        cond = TATTA if u < q2 <= v else ATT
        out.append(FailureRecord(q, int(u), int(v), cond, (s.atoms[d], s.atoms[e])))
    return out


def find_failures(m: LabelMatrix, s: AtomStructure, first_only: bool = False) -> List[FailureRecord]:
    """Every (edge, unmet need) pair, in canonical order.

    Only the t-witness needs are checked; a-only needs come from the slope
    skeleton, which no coloring touches.  Matrices without t-edges have no
    such needs.
    """
    if (m.q, m.n) != (s.q, s.n):
        from .verify import ShapeMismatch

        raise ShapeMismatch(f"matrix is for L({m.q},{m.n}), structure is L({s.q},{s.n})")
    if m.n == 0 or not m.doubled:
        return []
    lay = _Layout(m)
    limit = 1 if first_only else np.iinfo(np.int64).max
    cap = 1 if first_only else 1024
    while True:
        out = np.empty((cap, 4), dtype=np.int64)
        total, _ = _scan(*lay.args(), out, limit)
        if total <= cap:
            return _records(out[:total], s, m.q)
        cap = int(total)


def is_current(m: LabelMatrix, f: FailureRecord) -> bool:
    s = m.structure()
    d, e = (s.index(x) for x in f.need)
    return int(m.labels[f.u, f.v]) != 0 and not m.has_witness(f.u, f.v, d, e)


def resample_step(m: LabelMatrix, f: FailureRecord, rng: np.random.Generator) -> LabelMatrix:
    """Redraw all t-edges at both endpoints of ``f.edge``; returns a new matrix."""
    if not is_current(m, f):
        raise StaleFailure(f"edge ({f.u}, {f.v}) no longer misses {f.need[0]};{f.need[1]}")
    lay = _Layout(m)
    _resample(lay.C, lay.CT, f.u, f.v, lay.q2, lay.n, rng)
    out = m.copy()
    out.set_color_block(lay.C)
    return out


def default_max_rounds(q: int) -> int:
    return 1000 * 2 * q * q


def represent(
    q: int,
    n: int,
    seed: int = 0,
    max_rounds: Optional[int] = None,
    incremental: bool = False,
    verify: bool = True,
) -> Tuple[LabelMatrix, ColoringRun]:
    """Search for a representation of L(q, n) over two copies of F_q x F_q.

    Warns with :class:`InfeasibleWarning` when ``2n > q``.  On success the
    result is re-checked with :func:`find_failures` and, if ``verify``, with
    the full checker; a disagreement raises ``RuntimeError``.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    base = build_doubled(q)
    if max_rounds is None:
        max_rounds = default_max_rounds(q)
    run = ColoringRun(q, n, seed, max_rounds, infeasible=2 * n > q)
    if run.infeasible:
        warnings.warn(InfeasibleWarning(f"2n > q ({2 * n} > {q}): L({q},{n}) is not representable"),
                      stacklevel=2)
    m = randomize_t_colors(base, n, seed)
    _, rng = streams(seed)
    lay = _Layout(m)
    rounds, redrawn, ok = _search(*lay.args()[:6], lay.slopeD, lay.slopeP, q, n, rng,
                                  max_rounds, incremental)
    m.set_color_block(lay.C)
    run.rounds_used = int(rounds)
    run.resample_count = int(redrawn)
    run.outcome = SUCCESS if ok else EXHAUSTED
    if ok:
        s = m.structure()
        if find_failures(m, s, first_only=True):
            raise RuntimeError("search reported success but failures remain")
        if verify:
            from .verify import verify_full

            result = verify_full(m, s)
            if not result.valid:
                raise RuntimeError(f"search output fails full verification: {result.violations[0]}")
    return m, run


# -- Monte Carlo ------------------------------------------------------------

def att_probability(q: int, n: int) -> float:
    """Chance that one a-edge misses one fixed (t_i, t_j) pair."""
    return (1 - 1 / n**2) ** (q * q)


def tatta_probability(q: int, n: int) -> float:
    """Chance that one t-edge misses one fixed (a_k, t_j) in one orientation."""
    return (1 - 1 / n) ** (q - 1)


def _trial(seq: np.random.SeedSequence, lay: "_Layout", line0: np.ndarray) -> Tuple[int, int, int, int, int]:
    q, n = lay.q, lay.n
    q2 = q * q
    rng = np.random.Generator(np.random.PCG64(seq))
    C = rng.integers(0, n, size=(q2, q2)).astype(np.int8)
    CT = np.ascontiguousarray(C.T)
    att_fixed = int(not np.any((C[0] == 0) & (C[1] == 0)))
    tat_fixed = int(not np.any(C[line0, 0] == 0))
    scratch = np.empty((1, 4), dtype=np.int64)
    total, att = _scan(C, CT, lay.nbrD, lay.degD, lay.nbrP, lay.degP, q, n, scratch, np.iinfo(np.int64).max)
    return att_fixed, tat_fixed, int(total > 0), int(att), int(total - att)


def monte_carlo(q: int, n: int, trials: int, seed: int = 0, threads: int = 1) -> dict:
    """Empirical failure rates of independent uniform colorings.

    Fixed-edge frequencies use the a-edge between points 0 and 1 of D with
    need (t1, t1), and the t-edge between point 0 of D and point 0 of D'
    with need (a0, t1) through the D side.  Pooled rates average over all
    edges and needs (unbiased but correlated).  Trial i draws from child i
    of ``SeedSequence(seed)``, so ``threads`` does not affect the result.
    """
    from .bounds import union_bound_value

    if trials < 1:
        raise ValueError("trials must be at least 1")
    if n < 2:
        raise ValueError("n must be at least 2")
    lay = _Layout(_with_n(build_doubled(q), n))
    q2 = q * q
    line0 = lay.nbrD[0, 0, : lay.degD[0, 0]]
    children = np.random.SeedSequence(seed).spawn(trials)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda c: _trial(c, lay, line0), children))
    else:
        results = [_trial(c, lay, line0) for c in children]
    att_fixed, tat_fixed, any_fail, att_sum, tat_sum = (sum(col) for col in zip(*results))

    att_slots = 2 * math.comb(q2, 2) * n * n
    tat_slots = q2 * q2 * 2 * (q + 1) * n
    p_att = att_probability(q, n)
    p_tat = tatta_probability(q, n)

    def freq(k: int, p: float) -> dict:
        return {
            "count": int(k),
            "frequency": k / trials,
            "analytic": p,
            "sigma": math.sqrt(p * (1 - p) / trials),
        }

    p_any = any_fail / trials
    return {
        "q": q,
        "n": n,
        "trials": trials,
        "seed": seed,
        "att_fixed_edge": freq(att_fixed, p_att),
        "tatta_fixed_edge": freq(tat_fixed, p_tat),
        "att_pooled": att_sum / (trials * att_slots),
        "tatta_pooled": tat_sum / (trials * tat_slots),
        "any_edge_fails": {
            "count": int(any_fail),
            "frequency": p_any,
            "sigma": math.sqrt(max(p_any * (1 - p_any), 1 / trials) / trials),
            "union_bound": union_bound_value(q, n),
        },
    }
