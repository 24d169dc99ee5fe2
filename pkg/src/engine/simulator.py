"""
Functional simulator of the multiway and cascaded join strategies.

Relations are hash partitioned in DRAM, routed to a grid of PMUs and joined
locally. Every run returns the exact aggregate together with the counters
that the analytical model predicts.
"""

import logging
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import get_settings
from ..datagen import (
    PartitionKey,
    hash_buckets,
    nested_partition,
    partition,
    two_level_partition_S,
)
from ..machine import (
    MachineConfig,
    check_plan,
    default_config,
    effective_M,
    grid_side,
)
from ..machine.config import per_unit_capacity
from ..models import (
    HashLevel,
    HashPlan,
    JoinAggregate,
    Relation,
    RoleMismatchError,
    RunStats,
    Strategy,
)
from .kernels import equi_join_indices, group_sum, match_counts
from .pmu import PmuState, make_grid, make_units, scatter

logger = logging.getLogger(__name__)

LocalResult = Tuple[JoinAggregate, int, int]
LocalTask = Callable[[], LocalResult]
RunResult = Tuple[JoinAggregate, RunStats]


def _expect_roles(rel: Relation, name: str, roles: Sequence[str]) -> None:
    if rel.columns != tuple(roles):
        raise RoleMismatchError(
            f"{name} must have columns {''.join(roles)}, got {''.join(rel.columns)}"
        )


def _route(
    rel: Relation, column: str, level: HashLevel, buckets: int, plan: HashPlan
) -> List[List[list]]:
    """Rows of ``rel`` grouped by their bucket under ``level``."""
    dest = hash_buckets(rel.column(column), level, buckets, plan.salt(level))
    return scatter(rel, dest, buckets)


def _index_by_b(r_rows: List[list]) -> Dict[int, Counter]:
    index: Dict[int, Counter] = {}
    for a, b in r_rows:
        index.setdefault(b, Counter())[a] += 1
    return index


def _linear_local(
    r_rows: List[list], s_rows: List[list], t_counts: Dict[int, int], t_size: int
) -> LocalResult:
    """R(a,b) resident, S(b,c) staged, T(c,d) streamed past as a count per c."""
    agg = JoinAggregate()
    probes = len(s_rows)
    matches_st = 0

    if len(r_rows) < len(s_rows):
        index = _index_by_b(r_rows)
        for b, c in s_rows:
            m = t_counts.get(c, 0)
            if not m:
                continue
            matches_st += m
            probes += 1
            for a, k in index.get(b, {}).items():
                agg.add(a, k * m)
    else:
        weights: Dict[int, int] = {}
        for b, c in s_rows:
            m = t_counts.get(c, 0)
            if m:
                matches_st += m
                weights[b] = weights.get(b, 0) + m
        probes += len(r_rows)
        for a, b in r_rows:
            w = weights.get(b)
            if w:
                agg.add(a, w)

    comparisons = t_size * len(s_rows) + matches_st * len(r_rows)
    return agg, comparisons, probes


def _cyclic_local(
    r_rows: List[list], s_rows: List[list], t_rows: List[list]
) -> LocalResult:
    """Triangle closing on one grid unit: R(a,b), S(b,c), T(c,a)."""
    agg = JoinAggregate()
    t_by_c = Counter(c for c, _ in t_rows)
    t_by_ca = Counter((c, a) for c, a in t_rows)
    index = _index_by_b(r_rows)

    matches_st = 0
    probes = 0
    for b, c in s_rows:
        probes += 1
        matches_st += t_by_c.get(c, 0)
        group = index.get(b)
        if not group:
            continue
        for a, k in group.items():
            probes += 1
            n = t_by_ca.get((c, a), 0)
            if n:
                agg.add(a, k * n)

    comparisons = len(t_rows) * len(s_rows) + matches_st * len(r_rows)
    return agg, comparisons, probes


def _star_local(
    r_index: Dict[int, Counter],
    r_size: int,
    t_counts: Dict[int, int],
    t_size: int,
    s_rows: List[list],
) -> LocalResult:
    """Dimension replicas resident, fact tuples S(b,c) streamed."""
    agg = JoinAggregate()
    hits = 0
    probes = 0
    for b, c in s_rows:
        probes += 1
        group = r_index.get(b)
        if not group:
            continue
        hits += sum(group.values())
        probes += 1
        n = t_counts.get(c, 0)
        if n:
            for a, k in group.items():
                agg.add(a, k * n)

    comparisons = len(s_rows) * r_size + hits * t_size
    return agg, comparisons, probes


def _as_array(rows: List[list], width: int) -> np.ndarray:
    return np.asarray(rows, dtype=np.uint32).reshape(-1, width)


def _build_intermediate(
    r_rows: List[list], s_rows: List[list]
) -> Tuple[np.ndarray, int, int]:
    """Materialize R(a,b) join S(b,c) as (a,b,c) rows."""
    r = _as_array(r_rows, 2)
    s = _as_array(s_rows, 2)
    s_idx, r_idx = equi_join_indices(s[:, 0], r[:, 1])
    rows = np.column_stack((r[r_idx, 0], s[s_idx, 0], s[s_idx, 1]))
    return rows.astype(np.uint32).reshape(-1, 3), len(r) * len(s), len(s)


def _aggregate_intermediate(i_rows: List[list], t_rows: List[list]) -> LocalResult:
    """Probe I(a,b,c) against resident T(c,d) and count per a."""
    inter = _as_array(i_rows, 3)
    t = _as_array(t_rows, 2)
    agg = JoinAggregate()
    agg.add_pairs(group_sum(inter[:, 0], match_counts(inter[:, 2], t[:, 0])))
    return agg, len(inter) * len(t), len(inter)


class JoinEngine:
    """
    Executes join strategies over a simulated PMU grid.

    An engine holds a machine configuration and a worker count; it keeps no
    state between runs.
    """

    def __init__(
        self, cfg: Optional[MachineConfig] = None, workers: Optional[int] = None
    ) -> None:
        self.cfg = cfg or default_config()
        self.workers = workers or get_settings().engine.workers
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    def _run_tasks(
        self, tasks: List[LocalTask], agg: JoinAggregate, stats: RunStats
    ) -> None:
        """Evaluate per-PMU tasks and fold their results in unit order."""
        if self.workers > 1 and len(tasks) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                results = list(pool.map(lambda task: task(), tasks))
        else:
            results = [task() for task in tasks]

        for local, comparisons, probes in results:
            agg.merge(local)
            stats.absorb(comparisons, probes)

    def _load(
        self,
        units: List[PmuState],
        name: str,
        groups: List[List[list]],
        stats: RunStats,
    ) -> None:
        """
        Store one row group per unit as resident data.

        Args:
            units: Units receiving the groups, in bucket order
            name: Relation name the rows are stored under
            groups: Rows routed to each unit
            stats: Counters updated with the new peak occupancy

        Raises:
            PlanInfeasibleError: If a group overflows its unit
        """
        for unit, rows in zip(units, groups):
            unit.load(name, rows)
        stats.observe_occupancy(max((u.occupancy for u in units), default=0))

    def run(
        self,
        strategy: Strategy,
        R: Relation,
        S: Relation,
        T: Relation,
        plan: HashPlan,
    ) -> RunResult:
        """
        Dispatch to the runner for ``strategy``.

        Args:
            strategy: Join strategy to simulate
            R: Relation R(A,B)
            S: Relation S(B,C)
            T: Relation T(C,D), or T(C,A) for the cyclic join
            plan: Bucket counts and salts per hash level

        Returns:
            The aggregate and the run counters
        """
        strategy = Strategy(strategy)
        if strategy is Strategy.LINEAR3:
            return self.run_linear3(R, S, T, plan)
        if strategy is Strategy.CYCLIC3:
            return self.run_cyclic3(R, S, T, plan)
        if strategy is Strategy.STAR3:
            return self.run_star3(R, S, T, plan)
        star = strategy is Strategy.CASCADED_STAR
        return self.run_cascaded_binary(R, S, T, plan, star=star)

    def run_linear3(
        self, R: Relation, S: Relation, T: Relation, plan: HashPlan
    ) -> RunResult:
        """
        Three-way linear join R(A,B) S(B,C) T(C,D), grouped by A.

        R and S are partitioned by H(B); each partition of R is held on
        chip while its share of S streams past, and every non-empty cell
        S_ij re-reads the matching T bucket T_j.

        Args:
            R: Relation R(A,B)
            S: Relation S(B,C)
            T: Relation T(C,D)
            plan: Plan with h_bkt == U and H_bkt >= ceil(|R|/M)

        Returns:
            The aggregate and the run counters

        Raises:
            RoleMismatchError: If a relation has the wrong columns
            PlanInfeasibleError: If the plan or a unit load does not fit
        """
        _expect_roles(R, "R", "AB")
        _expect_roles(S, "S", "BC")
        _expect_roles(T, "T", "CD")
        cfg = self.cfg
        check_plan(Strategy.LINEAR3, R.size, S.size, T.size, plan, cfg)
        logger.info(
            f"linear3: |R|={R.size} |S|={S.size} |T|={T.size} "
            f"H={plan.H_bkt} g={plan.g_bkt}"
        )

        agg = JoinAggregate()
        stats = RunStats()
        capacity = per_unit_capacity(cfg)

        R_parts = partition(R, "B", HashLevel.H, plan.H_bkt, plan.salt(HashLevel.H))
        S_cells = two_level_partition_S(S, plan)
        T_parts = partition(T, "C", HashLevel.g, plan.g_bkt, plan.salt(HashLevel.g))
        t_counts = [Counter(T_j.column("C").tolist()) for T_j in T_parts]

        for i, R_i in enumerate(R_parts):
            units = make_units(cfg.U, capacity)
            stats.read(R_i.size)
            self._load(units, "R", _route(R_i, "B", HashLevel.h, cfg.U, plan), stats)

            for j, S_ij in enumerate(S_cells[i]):
                if S_ij.size == 0:
                    continue
                T_j = T_parts[j]
                stats.read(S_ij.size)
                # T_j is broadcast to every unit
                stats.read(T_j.size, cfg.U)

                tasks: List[LocalTask] = []
                staged = _route(S_ij, "B", HashLevel.h, cfg.U, plan)
                for unit, s_rows in zip(units, staged):
                    if not s_rows:
                        continue
                    unit.load("S", s_rows, resident=False)
                    tasks.append(
                        lambda r=unit.stored_R, s=s_rows, tc=t_counts[j], n=T_j.size: (
                            _linear_local(r, s, tc, n)
                        )
                    )
                self._run_tasks(tasks, agg, stats)
                for unit in units:
                    unit.discard("S")

        logger.info(f"linear3 done: {agg}, dram_tuples_read={stats.dram_tuples_read}")
        return agg, stats

    def run_cyclic3(
        self, R: Relation, S: Relation, T: Relation, plan: HashPlan
    ) -> RunResult:
        """
        Three-way cyclic join R(A,B) S(B,C) T(C,A), grouped by A.

        Args:
            R: Relation R(A,B)
            S: Relation S(B,C)
            T: Relation T(C,A)
            plan: Plan with h_bkt == g_bkt == sqrt(U)

        Returns:
            The aggregate and the run counters
        """
        _expect_roles(R, "R", "AB")
        _expect_roles(S, "S", "BC")
        _expect_roles(T, "T", "CA")
        cfg = self.cfg
        side = grid_side(cfg)
        check_plan(Strategy.CYCLIC3, R.size, S.size, T.size, plan, cfg)
        logger.info(
            f"cyclic3: |R|={R.size} |S|={S.size} |T|={T.size} "
            f"H={plan.H_bkt} G={plan.G_bkt} f={plan.f_bkt}"
        )

        agg = JoinAggregate()
        stats = RunStats()
        capacity = per_unit_capacity(cfg)

        def key(column: str, level: HashLevel) -> PartitionKey:
            return PartitionKey(column, level, plan.buckets(level), plan.salt(level))

        R_cells = nested_partition(R, key("A", HashLevel.H), key("B", HashLevel.G))
        S_cells = nested_partition(S, key("B", HashLevel.G), key("C", HashLevel.f))
        T_cells = nested_partition(T, key("A", HashLevel.H), key("C", HashLevel.f))
        h_salt = plan.salt(HashLevel.h)
        g_salt = plan.salt(HashLevel.g)

        for i in range(plan.H_bkt):
            for j in range(plan.G_bkt):
                R_ij = R_cells[i][j]
                units = make_grid(side, capacity)
                stats.read(R_ij.size)
                rows = hash_buckets(R_ij.column("A"), HashLevel.h, side, h_salt)
                cols = hash_buckets(R_ij.column("B"), HashLevel.g, side, g_salt)
                self._load(units, "R", scatter(R_ij, rows * side + cols, cfg.U), stats)

                for k in range(plan.f_bkt):
                    S_jk = S_cells[j][k]
                    if S_jk.size == 0:
                        continue
                    T_ik = T_cells[i][k]
                    # S down column g(b), T along row h(a)
                    stats.read(S_jk.size, side)
                    stats.read(T_ik.size, side)
                    s_by_col = _route(S_jk, "B", HashLevel.g, side, plan)
                    t_by_row = _route(T_ik, "A", HashLevel.h, side, plan)

                    tasks: List[LocalTask] = []
                    for unit in units:
                        row, col = unit.index
                        s_rows, t_rows = s_by_col[col], t_by_row[row]
                        if not s_rows or not t_rows:
                            continue
                        unit.load("S", s_rows, resident=False)
                        unit.load("T", t_rows, resident=False)
                        tasks.append(
                            lambda r=unit.stored_R, s=s_rows, t=t_rows: (
                                _cyclic_local(r, s, t)
                            )
                        )
                    self._run_tasks(tasks, agg, stats)
                    for unit in units:
                        unit.discard("S")
                        unit.discard("T")

        logger.info(f"cyclic3 done: {agg}, dram_tuples_read={stats.dram_tuples_read}")
        return agg, stats

    def run_star3(
        self, R: Relation, S: Relation, T: Relation, plan: HashPlan
    ) -> RunResult:
        """
        Star join: dimensions R(A,B), T(C,D) on chip, fact S(B,C) streamed.

        Args:
            R: Dimension R(A,B)
            S: Fact S(B,C)
            T: Dimension T(C,D)
            plan: Plan with h_bkt * g_bkt == U

        Returns:
            The aggregate and the run counters

        Raises:
            PlanInfeasibleError: If |R|+|T| exceeds the on-chip capacity
        """
        _expect_roles(R, "R", "AB")
        _expect_roles(S, "S", "BC")
        _expect_roles(T, "T", "CD")
        cfg = self.cfg
        check_plan(Strategy.STAR3, R.size, S.size, T.size, plan, cfg)
        h, g = plan.h_bkt, plan.g_bkt
        logger.info(f"star3: |R|={R.size} |S|={S.size} |T|={T.size} grid={h}x{g}")

        agg = JoinAggregate()
        stats = RunStats()
        # replicated dimension tiles count once against the whole chip, which
        # check_plan bounds by |R|+|T| <= M
        units = make_units(cfg.U, effective_M(cfg))

        # R replicated along row h(b), T along column g(c)
        stats.read(R.size, g)
        stats.read(T.size, h)
        r_rows = _route(R, "B", HashLevel.h, h, plan)
        t_rows = _route(T, "C", HashLevel.g, g, plan)
        for unit in units:
            x, y = divmod(unit.index, g)
            unit.load("R", r_rows[x])
            unit.load("T", t_rows[y])
        stats.observe_occupancy(max(u.occupancy for u in units))

        r_index = [_index_by_b(rows) for rows in r_rows]
        t_counts = [Counter(c for c, _ in rows) for rows in t_rows]

        stats.read(S.size)
        dest = hash_buckets(
            S.column("B"), HashLevel.h, h, plan.salt(HashLevel.h)
        ) * g + hash_buckets(S.column("C"), HashLevel.g, g, plan.salt(HashLevel.g))
        staged = scatter(S, dest, cfg.U)

        tasks: List[LocalTask] = []
        for unit, s_rows in zip(units, staged):
            if not s_rows:
                continue
            x, y = divmod(unit.index, g)
            unit.load("S", s_rows, resident=False)
            tasks.append(
                lambda x=x, y=y, s=s_rows: _star_local(
                    r_index[x], len(r_rows[x]), t_counts[y], len(t_rows[y]), s
                )
            )
        self._run_tasks(tasks, agg, stats)

        logger.info(f"star3 done: {agg}, dram_tuples_read={stats.dram_tuples_read}")
        return agg, stats

    def run_cascaded_binary(
        self,
        R: Relation,
        S: Relation,
        T: Relation,
        plan: HashPlan,
        star: bool = False,
    ) -> RunResult:
        """
        Two binary hash joins with the intermediate R(A,B,C) materialized.

        The star variant keeps R, then T, wholly on chip; the self-join
        variant partitions R by H(B) and T by G(C).

        Args:
            R: Relation R(A,B)
            S: Relation S(B,C)
            T: Relation T(C,D)
            plan: Plan with h_bkt == g_bkt == U
            star: Use the star variant

        Returns:
            The aggregate and the run counters; ``spilled`` is set when the
            intermediate exceeds DRAM capacity
        """
        _expect_roles(R, "R", "AB")
        _expect_roles(S, "S", "BC")
        _expect_roles(T, "T", "CD")
        cfg = self.cfg
        strategy = Strategy.CASCADED_STAR if star else Strategy.CASCADED_SELF
        check_plan(strategy, R.size, S.size, T.size, plan, cfg)
        logger.info(f"{strategy.value}: |R|={R.size} |S|={S.size} |T|={T.size}")

        agg = JoinAggregate()
        stats = RunStats()
        capacity = per_unit_capacity(cfg)

        if star:
            R_parts, S_parts = [R], [S]
        else:
            H_salt = plan.salt(HashLevel.H)
            R_parts = partition(R, "B", HashLevel.H, plan.H_bkt, H_salt)
            S_parts = partition(S, "B", HashLevel.H, plan.H_bkt, H_salt)

        chunks: List[np.ndarray] = []
        for R_i, S_i in zip(R_parts, S_parts):
            units = make_units(cfg.U, capacity)
            stats.read(R_i.size)
            self._load(units, "R", _route(R_i, "B", HashLevel.h, cfg.U, plan), stats)

            stats.read(S_i.size)
            staged = _route(S_i, "B", HashLevel.h, cfg.U, plan)
            for unit, s_rows in zip(units, staged):
                if not s_rows or not unit.stored_R:
                    stats.absorb(0, len(s_rows))
                    continue
                rows, comparisons, probes = _build_intermediate(unit.stored_R, s_rows)
                stats.absorb(comparisons, probes)
                chunks.append(rows)

        inter = np.concatenate(chunks) if chunks else np.empty((0, 3))
        I = Relation("I", "ABC", inter)
        stats.intermediate_tuples = I.size
        spill_bytes = I.size * get_settings().model.intermediate_tuple_width
        stats.spilled = spill_bytes > cfg.dram_capacity_bytes
        if stats.spilled:
            logger.warning(f"Intermediate of {spill_bytes} bytes spills past DRAM")

        if star:
            T_parts, I_parts = [T], [I]
        else:
            G_salt = plan.salt(HashLevel.G)
            T_parts = partition(T, "C", HashLevel.G, plan.G_bkt, G_salt)
            I_parts = partition(I, "C", HashLevel.G, plan.G_bkt, G_salt)

        for T_j, I_j in zip(T_parts, I_parts):
            units = make_units(cfg.U, capacity)
            stats.read(T_j.size)
            self._load(units, "T", _route(T_j, "C", HashLevel.g, cfg.U, plan), stats)

            stats.read(I_j.size)
            tasks: List[LocalTask] = []
            staged = _route(I_j, "C", HashLevel.g, cfg.U, plan)
            for unit, i_rows in zip(units, staged):
                if not i_rows:
                    continue
                if not unit.stored_T:
                    stats.absorb(0, len(i_rows))
                    continue
                tasks.append(
                    lambda i=i_rows, t=unit.stored_T: _aggregate_intermediate(i, t)
                )
            self._run_tasks(tasks, agg, stats)

        logger.info(
            f"{strategy.value} done: {agg}, intermediate={I.size}, "
            f"dram_tuples_read={stats.dram_tuples_read}"
        )
        return agg, stats


def create_engine(
    cfg: Optional[MachineConfig] = None, workers: Optional[int] = None
) -> JoinEngine:
    """Factory function to create a join engine."""
    return JoinEngine(cfg, workers)


def run_linear3(
    R: Relation, S: Relation, T: Relation, plan: HashPlan, cfg: MachineConfig
) -> RunResult:
    return JoinEngine(cfg).run_linear3(R, S, T, plan)


def run_cyclic3(
    R: Relation, S: Relation, T: Relation, plan: HashPlan, cfg: MachineConfig
) -> RunResult:
    return JoinEngine(cfg).run_cyclic3(R, S, T, plan)


def run_star3(
    R: Relation, S: Relation, T: Relation, plan: HashPlan, cfg: MachineConfig
) -> RunResult:
    return JoinEngine(cfg).run_star3(R, S, T, plan)


def run_cascaded_binary(
    R: Relation,
    S: Relation,
    T: Relation,
    plan: HashPlan,
    cfg: MachineConfig,
    star: bool = False,
) -> RunResult:
    return JoinEngine(cfg).run_cascaded_binary(R, S, T, plan, star=star)
