"""
Relation and data-profile types.

Relations are column-major numpy arrays of unsigned 32-bit keys. Every key
column is four bytes wide, so a base relation tuple is eight bytes and an
intermediate R(ABC) tuple is twelve.
"""

from dataclasses import dataclass
from typing import Iterable, Sequence, Tuple

import numpy as np

from .errors import RoleMismatchError

ROLES = ("A", "B", "C", "D")
COLUMN_WIDTH_BYTES = 4
TUPLE_WIDTH_BYTES = 8
INTERMEDIATE_TUPLE_WIDTH_BYTES = 12
MAX_DISTINCT = 2**32


@dataclass(frozen=True)
class DataProfile:
    """Size, distinct-value count and seed of a synthetic relation."""
    n: int
    d: int
    seed: int = 0

    def validate(self) -> None:
        if self.n < 0:
            raise ValueError("n must be non-negative")
        if self.d < 1:
            raise ValueError("d must be at least 1")
        if self.d > MAX_DISTINCT:
            raise ValueError("d cannot exceed 2^32")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    def to_dict(self) -> dict:
        return {"n": self.n, "d": self.d, "seed": self.seed}

    @classmethod
    def from_dict(cls, data: dict) -> "DataProfile":
        return cls(n=int(data["n"]), d=int(data["d"]), seed=int(data.get("seed", 0)))


class Relation:
    """
    A multiset of fixed-width tuples over named column roles.

    Duplicates are kept. Base relations have two columns; materialized
    intermediates carry three or more.
    """

    def __init__(self, name: str, columns: Sequence[str], data: np.ndarray) -> None:
        columns = tuple(columns)
        for role in columns:
            if role not in ROLES:
                raise ValueError(f"Unknown column role: {role}")
        if len(set(columns)) != len(columns):
            raise ValueError(f"Duplicate column roles: {columns}")

        array = np.asarray(data, dtype=np.uint32)
        if array.size == 0:
            array = array.reshape(0, len(columns))
        if array.ndim != 2 or array.shape[1] != len(columns):
            raise ValueError(
                f"Relation {name} expects {len(columns)} columns, "
                f"got shape {array.shape}"
            )

        self.name = name
        self.columns: Tuple[str, ...] = columns
        self.data = array

    @classmethod
    def empty(cls, name: str, columns: Sequence[str]) -> "Relation":
        return cls(name, columns, np.empty((0, len(tuple(columns))), dtype=np.uint32))

    @classmethod
    def from_rows(
        cls, name: str, columns: Sequence[str], rows: Iterable[Sequence[int]]
    ) -> "Relation":
        rows = list(rows)
        if not rows:
            return cls.empty(name, columns)
        return cls(name, columns, np.array(rows, dtype=np.uint32))

    @property
    def size(self) -> int:
        return int(self.data.shape[0])

    @property
    def tuple_width(self) -> int:
        return COLUMN_WIDTH_BYTES * len(self.columns)

    @property
    def nbytes(self) -> int:
        return self.size * self.tuple_width

    def __len__(self) -> int:
        return self.size

    def index_of(self, role: str) -> int:
        try:
            return self.columns.index(role)
        except ValueError:
            raise RoleMismatchError(
                f"Relation {self.name}{self.columns} has no column {role}"
            ) from None

    def column(self, role: str) -> np.ndarray:
        return self.data[:, self.index_of(role)]

    def take(self, indices: np.ndarray, name: str = "") -> "Relation":
        return Relation(name or self.name, self.columns, self.data[indices])

    def rows(self) -> list:
        """Tuples as lists of Python ints."""
        return self.data.tolist()

    def sorted_rows(self) -> list:
        return sorted(tuple(row) for row in self.rows())

    def __repr__(self) -> str:
        return f"Relation({self.name!r}, {''.join(self.columns)}, size={self.size})"
