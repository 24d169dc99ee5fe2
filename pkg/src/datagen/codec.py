"""
CSV codec for relations: a ``col1,col2`` header naming roles, then one
unsigned-integer row per tuple.
"""

import hashlib
import warnings
from pathlib import Path
from typing import Union

import numpy as np

from ..models import Relation

PathLike = Union[str, Path]


def write_relation_csv(rel: Relation, path: PathLike) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    np.savetxt(
        path,
        rel.data,
        fmt="%d",
        delimiter=",",
        header=",".join(rel.columns),
        comments="",
    )
    return path


def read_relation_csv(path: PathLike, name: str = "") -> Relation:
    path = Path(path)
    with open(path) as handle:
        header = handle.readline().strip()
    columns = tuple(part.strip() for part in header.split(","))

    with warnings.catch_warnings():
        # loadtxt warns on a header-only file
        warnings.simplefilter("ignore", UserWarning)
        data = np.loadtxt(
            path, delimiter=",", skiprows=1, dtype=np.uint64, ndmin=2
        )
    if data.size and int(data.max()) > 0xFFFFFFFF:
        raise ValueError(f"{path}: values must fit in 32 bits")
    return Relation(name or path.stem, columns, data.astype(np.uint32))


def relation_checksum(path: PathLike) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 16), b""):
            digest.update(chunk)
    return digest.hexdigest()
