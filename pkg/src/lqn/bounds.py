"""Union-bound and local-lemma thresholds for coloring the doubled structure.

All logarithms are natural.  For a fresh uniform coloring with n colors:

* an a-edge misses a fixed (t_i, t_j) pair with probability (1 - 1/n^2)^(q^2);
* a t-edge misses a fixed (a_k, t_j) in one orientation with probability
  (1 - 1/n)^(q - 1).

The union bound over all 2*C(q^2, 2) a-edges and q^4 t-edges is

    2 C(q^2,2) n^2 (1-1/n^2)^(q^2) + q^4 2n(q+1) (1-1/n)^(q-1),

and the symmetric local lemma with d = 4q^2 and p = 2n(q+1)(1-1/n)^(q-1)
asks for e*d*p <= 1, i.e.

    1 + log 8 + log n + 2 log q + log(q+1) <= (q-1) log(n/(n-1)).
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

from .gf import is_prime_power, next_prime_power

__all__ = [
    "BoundsReport",
    "LLLCheck",
    "ThresholdRow",
    "bounds_report",
    "figure1_csv",
    "figure1_data",
    "figure2_csv",
    "is_prime_power",
    "legacy_threshold",
    "lll_product",
    "lll_satisfied",
    "min_n_for_epsilon",
    "next_prime_power",
    "threshold_table",
    "union_bound_log",
    "union_bound_value",
]


def _log1m(x: float) -> float:
    """log(1 - x), -inf at x = 1."""
    return -math.inf if x == 1 else math.log1p(-x)


def union_bound_terms_log(q: int, n: int) -> Tuple[float, float]:
    """Natural logs of the a-edge and t-edge addends of the union bound."""
    if q < 2 or n < 1:
        raise ValueError("need q >= 2 and n >= 1")
    q2 = q * q
    att = math.log(q2 * (q2 - 1)) + 2 * math.log(n) + q2 * _log1m(1 / n**2)
    tat = math.log(2 * n) + 4 * math.log(q) + math.log(q + 1) + (q - 1) * _log1m(1 / n)
    return att, tat


def union_bound_log(q: int, n: int) -> float:
    att, tat = union_bound_terms_log(q, n)
    hi = max(att, tat)
    if hi == -math.inf:
        return -math.inf
    return hi + math.log(math.exp(att - hi) + math.exp(tat - hi))


def union_bound_value(q: int, n: int) -> float:
    """Union bound on the chance that some edge fails (may exceed 1 or overflow to inf)."""
    lg = union_bound_log(q, n)
    return math.exp(lg) if lg < 709 else math.inf


def union_ok(q: int, n: int) -> bool:
    return union_bound_log(q, n) < 0


class LLLCheck(NamedTuple):
    ok: bool
    lhs: float
    rhs: float


def lll_satisfied(q: int, n: int) -> LLLCheck:
    if q < 1 or n < 1:
        raise ValueError("need q >= 1 and n >= 1")
    lhs = 1 + math.log(8) + math.log(n) + 2 * math.log(q) + math.log(q + 1)
    # log(n/(n-1)) without cancellation at large n
    rhs = math.inf if n == 1 else -(q - 1) * math.log1p(-1 / n)
    return LLLCheck(lhs <= rhs, lhs, rhs)


def lll_product(q: int, n: int) -> float:
    """e * 4q^2 * 2n(q+1)(1-1/n)^(q-1), evaluated directly."""
    return math.e * 4 * q * q * 2 * n * (q + 1) * (1 - 1 / n) ** (q - 1)


def lll_with_att_ok(q: int, n: int) -> bool:
    """Local lemma with p taken as the larger of the two per-edge bounds."""
    p_tat = 2 * n * (q + 1) * (1 - 1 / n) ** (q - 1)
    p_att = n * n * (1 - 1 / n**2) ** (q * q)
    return math.e * 4 * q * q * max(p_tat, p_att) <= 1


def legacy_threshold(n: int) -> int:
    """Older sufficient condition: representable once q > 2304 n^2 + 1."""
    return 2304 * n * n + 1


@dataclass
class BoundsReport:
    q: int
    n: int
    union_bound_value: float
    union_bound_log: float
    lll_lhs: float
    lll_rhs: float
    union_ok: bool
    lll_ok: bool
    lll_with_att_ok: bool
    legacy_ok: bool
    infeasible: bool
    prime_power: bool

    def to_dict(self) -> dict:
        d = asdict(self)
        for key in ("union_bound_value", "union_bound_log", "lll_rhs"):
            if math.isinf(d[key]):
                d[key] = "inf" if d[key] > 0 else "-inf"
        return d


def bounds_report(q: int, n: int) -> BoundsReport:
    ub_log = union_bound_log(q, n)
    lll = lll_satisfied(q, n)
    return BoundsReport(
        q=q,
        n=n,
        union_bound_value=union_bound_value(q, n),
        union_bound_log=ub_log,
        lll_lhs=lll.lhs,
        lll_rhs=lll.rhs,
        union_ok=ub_log < 0,
        lll_ok=lll.ok,
        lll_with_att_ok=lll_with_att_ok(q, n),
        legacy_ok=q > legacy_threshold(n),
        infeasible=2 * n > q,
        prime_power=is_prime_power(q),
    )


class ThresholdRow(NamedTuple):
    n: int
    q_union: int
    q_lll: int


def _first_prime_power(pred, start: int = 2) -> int:
    q = start if is_prime_power(start) else next_prime_power(start)
    while not pred(q):
        q = next_prime_power(q)
    return q


def threshold_table(n_min: int, n_max: int) -> List[ThresholdRow]:
    """Smallest prime powers meeting the union bound and the local lemma, per n."""
    if n_min < 2:
        raise ValueError("n_min must be at least 2")
    rows = []
    for n in range(n_min, n_max + 1):
        q_union = _first_prime_power(lambda q: union_ok(q, n))
        q_lll = _first_prime_power(lambda q: lll_satisfied(q, n).ok)
        rows.append(ThresholdRow(n, q_union, q_lll))
    return rows


def att_changes_table(rows: Iterable[ThresholdRow]) -> List[Tuple[int, int, int]]:
    """Rows whose local-lemma threshold moves when the a-edge bound is folded in.

    Returns ``(n, q_lll, q_lll_with_att)`` for every changed row.
    """
    out = []
    for r in rows:
        q2 = _first_prime_power(lambda q: lll_satisfied(q, r.n).ok and lll_with_att_ok(q, r.n))
        if q2 != r.q_lll:
            out.append((r.n, r.q_lll, q2))
    return out


def format_table(rows: Sequence[ThresholdRow]) -> str:
    lines = [f"{'n':>4}  {'union bound':>11}  {'local lemma':>11}"]
    lines += [f"{r.n:>4}  {r.q_union:>11}  {r.q_lll:>11}" for r in rows]
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Iterable[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def figure1_data(n_min: int, n_max: int) -> List[ThresholdRow]:
    if n_max < n_min:
        return []
    return threshold_table(n_min, n_max)


def figure1_csv(n_min: int, n_max: int) -> str:
    return _csv(("n", "q_union", "q_lll"), figure1_data(n_min, n_max))


# -- epsilon sweep ------------------------------------------------------------

def q_for_epsilon(n: int, eps: float) -> int:
    return max(1, math.ceil(n * math.log(n) ** (1 + eps)))


def _holds(n: int, eps: float) -> bool:
    return lll_satisfied(q_for_epsilon(n, eps), n).ok


class SearchCapExceeded(RuntimeError):
    pass


def min_n_for_epsilon(
    eps: float, persistence: int = 100, linear_limit: int = 200_000, cap: int = 10**15
) -> int:
    """Smallest n >= 2 where q = ceil(n (log n)^(1+eps)) meets the local lemma.

    The condition must also hold for the ``persistence`` following values of n.
    Up to ``linear_limit`` every n is scanned.  Beyond it the window test is
    bracketed by doubling and then bisected, which assumes the window test
    is monotone out there; the slack in q from the ceiling moves the
    margin by at most about 1/n, well under its growth per step.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    run_start, run = 2, 0
    n = 2
    while n <= linear_limit:
        if _holds(n, eps):
            if run == 0:
                run_start = n
            run += 1
            if run > persistence:
                return run_start
        else:
            run = 0
        n += 1

    def window(m: int) -> bool:
        return all(_holds(k, eps) for k in range(m, m + persistence + 1))

    lo = linear_limit - persistence  # no window started at or before this point
    hi = linear_limit
    while not window(hi):
        lo = hi
        hi *= 2
        if hi > cap:
            raise SearchCapExceeded(f"no n <= {cap} found for eps={eps}")
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if window(mid):
            hi = mid
        else:
            lo = mid
    return hi


def figure2_data(eps_grid: Iterable[float], **kwargs) -> List[Tuple[float, Optional[int]]]:
    out = []
    for eps in eps_grid:
        try:
            out.append((eps, min_n_for_epsilon(eps, **kwargs)))
        except SearchCapExceeded:
            out.append((eps, None))
    return out


def figure2_csv(eps_grid: Iterable[float], **kwargs) -> str:
    rows = [(repr(float(e)), "" if n is None else n) for e, n in figure2_data(eps_grid, **kwargs)]
    return _csv(("epsilon", "n_min"), rows)
