from __future__ import annotations
from typing import List, Optional
import glob
import os
from pydantic import ValidationError
from .config import config_data, resolve_cache_dir
from .errors import CacheError
from .logger import logger
from .perm import Partition, partitions
from .symchar import CharacterTable, character_table, degree, register_table
from .types import CharTableFile
from .utils import SeedLike, make_rng


FILE_PATTERN: str = "chartable_n{n}_v{version}.json"


def table_path(n: int, cache_dir: str = "") -> str:
    return os.path.join(
        resolve_cache_dir(cache_dir),
        FILE_PATTERN.format(n=n, version=config_data["cache-version"]),
    )


def _to_file(table: CharacterTable) -> CharTableFile:
    return CharTableFile(
        version=config_data["cache-version"],
        n=table.n,
        partitions=[list(lam) for lam in table.partitions],
        values=[[str(v) for v in row] for row in table.values],
    )


def _from_file(data: CharTableFile, n: int, seed: SeedLike = None) -> CharacterTable:
    if data.version != config_data["cache-version"] or data.n != n:
        raise CacheError(f"Cached table has version {data.version}, n={data.n}.")
    labels: List[Partition] = list(partitions(n))
    if [list(lam) for lam in labels] != data.partitions:
        raise CacheError("Cached partitions do not match partitions(n).")
    if len(data.values) != len(labels) or any(len(row) != len(labels) for row in data.values):
        raise CacheError("Cached table has the wrong shape.")
    try:
        values = [[int(v) for v in row] for row in data.values]
    except ValueError as e:
        raise CacheError(f"Cached table holds a non-integer value: {e}") from e
    table = CharacterTable(n, labels, values)
    if table.degrees != [degree(lam) for lam in labels]:
        raise CacheError("Cached degrees disagree with the hook length formula.")
    row = make_rng(seed).randrange(len(labels))
    if not table.check_row(row):
        raise CacheError(f"Cached row {row} fails orthogonality.")
    return table


def save_table(table: CharacterTable, cache_dir: str = "") -> Optional[str]:
    path = table_path(table.n, cache_dir)
    try:
        os.makedirs(os.path.dirname(path), exist_ok=True)
        with open(path, "w") as f:
            f.write(_to_file(table).model_dump_json())
    except OSError as e:
        logger.error(f"Could not write character table cache {path}: {e}")
        return None
    logger.info(f"Saved character table of S_{table.n} to {path}.")
    return path


def load_table(n: int, cache_dir: str = "", seed: SeedLike = None) -> Optional[CharacterTable]:
    """Cached table for n, or None when missing, unreadable or corrupted."""
    path = table_path(n, cache_dir)
    if not os.path.exists(path):
        logger.debug(f"No cached character table at {path}.")
        return None
    try:
        with open(path, "r") as f:
            data = CharTableFile.model_validate_json(f.read())
        return _from_file(data, n, seed)
    except OSError as e:
        logger.error(f"Could not read character table cache {path}: {e}")
    except (ValidationError, CacheError) as e:
        logger.warning(f"Discarding corrupted character table cache {path}: {e}")
    return None


def load_or_build(
    n: int,
    cache_dir: str = "",
    threads: Optional[int] = None,
    seed: SeedLike = None,
) -> CharacterTable:
    table = load_table(n, cache_dir, seed)
    if table is not None:
        logger.debug(f"Character table of S_{n} served from cache.")
        return register_table(table)
    table = character_table(n, threads)
    save_table(table, cache_dir)
    return table


def clear_cache(cache_dir: str = "") -> int:
    removed = 0
    pattern = os.path.join(resolve_cache_dir(cache_dir), "chartable_n*_v*.json")
    for path in glob.glob(pattern):
        try:
            os.remove(path)
            removed += 1
        except OSError as e:
            logger.error(f"Could not remove {path}: {e}")
    logger.info(f"Removed {removed} cached character tables.")
    return removed
