"""
Brute-force reference joins.

These are index nested loops over Python ints: every matching (r, s, t)
combination is enumerated through dictionaries keyed on the join values.
They are meant for desk-scale inputs and share no code with the engine.
"""

import logging
from collections import Counter, defaultdict
from pathlib import Path
from typing import Sequence, Union

from ..models import JoinAggregate, Relation, RoleMismatchError

logger = logging.getLogger(__name__)


def _require_roles(rel: Relation, expected: Sequence[str]) -> None:
    if rel.columns != tuple(expected):
        raise RoleMismatchError(
            f"{rel.name} has roles {''.join(rel.columns)}, expected {''.join(expected)}"
        )


def oracle_linear3(R: Relation, S: Relation, T: Relation) -> JoinAggregate:
    """Count of R(AB) ⋈ S(BC) ⋈ T(CD) grouped by R.a."""
    _require_roles(R, "AB")
    _require_roles(S, "BC")
    _require_roles(T, "CD")

    t_by_c = Counter(T.column("C").tolist())
    chains_from_b: dict = defaultdict(int)
    for b, c in S.rows():
        chains_from_b[b] += t_by_c.get(c, 0)

    result = JoinAggregate()
    for a, b in R.rows():
        result.add(a, chains_from_b.get(b, 0))
    return result


def oracle_cyclic3(R: Relation, S: Relation, T: Relation) -> JoinAggregate:
    """Count of R(AB) ⋈ S(BC) ⋈ T(CA) grouped by R.a."""
    _require_roles(R, "AB")
    _require_roles(S, "BC")
    _require_roles(T, "CA")

    t_by_ca = Counter(map(tuple, T.rows()))
    s_by_b: dict = defaultdict(list)
    for b, c in S.rows():
        s_by_b[b].append(c)

    result = JoinAggregate()
    for a, b in R.rows():
        for c in s_by_b.get(b, ()):
            result.add(a, t_by_ca.get((c, a), 0))
    return result


def oracle_binary(X: Relation, Y: Relation, joincol: str) -> Relation:
    """Materialized equi-join of X and Y on ``joincol``."""
    if joincol not in X.columns or joincol not in Y.columns:
        raise RoleMismatchError(
            f"Join column {joincol} missing from "
            f"{X.name}{X.columns} or {Y.name}{Y.columns}"
        )
    carried = [role for role in Y.columns if role != joincol]
    clash = set(carried) & set(X.columns)
    if clash:
        raise RoleMismatchError(f"Roles {sorted(clash)} appear on both join sides")

    x_key = X.index_of(joincol)
    y_key = Y.index_of(joincol)
    y_rest = [Y.index_of(role) for role in carried]

    y_by_key: dict = defaultdict(list)
    for row in Y.rows():
        y_by_key[row[y_key]].append([row[i] for i in y_rest])

    out = []
    for row in X.rows():
        for rest in y_by_key.get(row[x_key], ()):
            out.append(row + rest)

    columns = X.columns + tuple(carried)
    logger.debug(f"Binary join {X.name} ⋈ {Y.name} on {joincol}: {len(out)} tuples")
    return Relation.from_rows(f"{X.name}{Y.name}", columns, out)


def group_count(rel: Relation, column: str = "A") -> JoinAggregate:
    """Number of tuples per value of ``column``."""
    return JoinAggregate(Counter(rel.column(column).tolist()))


def write_aggregate_csv(agg: JoinAggregate, path: Union[str, Path]) -> Path:
    """Write ``a_value,count`` rows sorted by group key."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    agg.write_csv(path)
    logger.info(f"Wrote {len(agg)} groups to {path}")
    return path
