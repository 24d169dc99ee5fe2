"""
Closed-form tuples-read costs of the multiway joins.

All quantities are tuple counts. Partition counts are kept real-valued here;
callers that need an executable plan take the ceiling.
"""

import logging
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional, Union

logger = logging.getLogger(__name__)

Number = Union[int, float]


@dataclass(frozen=True)
class CostInputs:
    """Relation sizes, on-chip capacity M and selectivity d."""
    size_r: Number
    size_s: Number
    size_t: Number
    M: Number
    d: Number = 1
    H: Optional[Number] = None
    G: Optional[Number] = None
    size_i: Optional[Number] = None

    def validate(self) -> None:
        if self.M < 1:
            raise ValueError("M must be at least 1")
        if min(self.size_r, self.size_s, self.size_t) < 0:
            raise ValueError("Relation sizes must be non-negative")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.H is not None and self.H <= 0:
            raise ValueError("H must be positive")
        if self.G is not None and self.G <= 0:
            raise ValueError("G must be positive")

    def with_sizes(self, **changes: Number) -> "CostInputs":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "size_r": self.size_r,
            "size_s": self.size_s,
            "size_t": self.size_t,
            "M": self.M,
            "d": self.d,
            "H": self.H,
            "G": self.G,
            "size_i": self.size_i,
        }


def tuples_read_linear(inp: CostInputs) -> float:
    """|R| + |S| + |R||T|/M: every partition of R sees all of T once."""
    if inp.M == 0:
        raise ValueError("M must be non-zero")
    inp.validate()
    return inp.size_r + inp.size_s + inp.size_r * inp.size_t / inp.M


def optimal_H(inp: CostInputs) -> float:
    """H minimizing the cyclic cost: sqrt(|R||T| / (M|S|))."""
    inp.validate()
    if inp.size_s == 0 or inp.size_r == 0 or inp.size_t == 0:
        raise ValueError("Cyclic cost needs non-empty relations")
    return math.sqrt(inp.size_r * inp.size_t / (inp.M * inp.size_s))


def cyclic_cost(inp: CostInputs, H: Optional[Number] = None) -> float:
    """
    |R| + H|S| + G|T| for the cyclic join.

    G defaults to |R|/(M H). When both H and G are given they must cover R,
    i.e. G*H >= |R|/M.
    """
    inp.validate()
    if H is None:
        H = inp.H if inp.H is not None else optimal_H(inp)
    if H <= 0:
        raise ValueError("H must be positive")

    if inp.G is not None:
        if inp.G * H < inp.size_r / inp.M * (1 - 1e-12):
            raise ValueError(
                f"G*H={inp.G * H} does not cover |R|/M={inp.size_r / inp.M}"
            )
        G = inp.G
    else:
        G = inp.size_r / (inp.M * H)
    return inp.size_r + H * inp.size_s + G * inp.size_t


def cyclic_min_cost(inp: CostInputs) -> float:
    """|R| + 2 sqrt(|R||S||T|/M), the cyclic cost at the optimal H."""
    inp.validate()
    if min(inp.size_r, inp.size_s, inp.size_t) == 0:
        raise ValueError("Cyclic cost needs non-empty relations")
    return inp.size_r + 2 * math.sqrt(inp.size_r * inp.size_s * inp.size_t / inp.M)


def intermediate_size(size_r: Number, size_s: Number, d: Number) -> Number:
    """Expected |R join S| under uniform keys: |R||S|/d."""
    if d < 1:
        raise ValueError("d must be at least 1")
    values = (size_r, size_s, d)
    if all(float(v).is_integer() for v in values):
        numerator = int(size_r) * int(size_s)
        if numerator % int(d) == 0:
            return numerator // int(d)
    return size_r * size_s / d


def linear_breakeven_M(inp: CostInputs, budget: Number) -> float:
    """Smallest M with tuples_read_linear <= budget."""
    slack = budget - inp.size_r - inp.size_s
    if slack <= 0:
        raise ValueError(f"Budget {budget} is below |R|+|S|; no M suffices")
    return inp.size_r * inp.size_t / slack


def cyclic_breakeven_M(inp: CostInputs, budget: Number) -> float:
    """Smallest M with cyclic_min_cost <= budget."""
    slack = budget - inp.size_r
    if slack <= 0:
        raise ValueError(f"Budget {budget} is below |R|; no M suffices")
    return 4 * inp.size_r * inp.size_s * inp.size_t / slack**2


def cyclic_self_join_reads(size: Number, M: Number) -> float:
    """Cyclic min cost with R = S = T = F: F(1 + sqrt(F/M))."""
    if M <= 0:
        raise ValueError("M must be positive")
    return size * (1 + math.sqrt(size / M))


def solve_breakeven_M(
    cost_of_M: Callable[[float], float],
    budget: float,
    lo: float = 1.0,
    hi: float = 1e18,
    rel_tol: float = 1e-9,
) -> float:
    """
    Geometric bisection for the M where a decreasing cost meets ``budget``.

    Returns the smallest M (to ``rel_tol``) with cost_of_M(M) <= budget.
    """
    if cost_of_M(hi) > budget:
        raise ValueError(f"Cost stays above {budget} up to M={hi}")
    if cost_of_M(lo) <= budget:
        return lo

    while hi / lo > 1 + rel_tol:
        mid = math.sqrt(lo * hi)
        if cost_of_M(mid) <= budget:
            hi = mid
        else:
            lo = mid
    logger.debug(f"Break-even M={hi:.6g} for budget {budget:.6g}")
    return hi
