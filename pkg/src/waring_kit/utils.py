from __future__ import annotations
import random
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Sequence, TypeVar, Union
import re
from .config import config_data
from .errors import PreconditionError
from .logger import logger


Item = TypeVar("Item")
Result = TypeVar("Result")

SeedLike = Union[int, random.Random, None]

TYPE_TOKEN_REGEX: re.Pattern = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def make_rng(seed: SeedLike = None) -> random.Random:
    # Caller-owned generator, default seed comes from the config file
    if isinstance(seed, random.Random):
        return seed
    if seed is None:
        seed = config_data["seed"]
    return random.Random(seed)


def parse_type(text: str) -> List[int]:
    parts: List[int] = []
    for token in filter(bool, (t.strip() for t in text.split(","))):
        match = TYPE_TOKEN_REGEX.match(token)
        if match is None:
            raise PreconditionError(f"Invalid cycle type token '{token}'.")
        part = int(match.group(1))
        repeat = int(match.group(2)) if match.group(2) else 1
        parts.extend([part] * repeat)
    if not parts:
        raise PreconditionError(f"Empty cycle type '{text}'.")
    return parts


def format_type(parts: Sequence[int]) -> str:
    return ",".join(map(str, parts))


def resolve_threads(threads: Optional[int] = None) -> int:
    threads = threads if threads is not None else config_data["threads"]
    return max(1, int(threads))


def parallel_map(
    fn: Callable[[Item], Result],
    items: Iterable[Item],
    threads: Optional[int] = None,
) -> List[Result]:
    # Results always come back in input order
    work: List[Item] = list(items)
    threads = resolve_threads(threads)
    if threads == 1 or len(work) < 2:
        return [fn(item) for item in work]
    logger.debug(f"Mapping {len(work)} items on {threads} threads.")
    with ThreadPoolExecutor(max_workers=threads) as executor:
        return list(executor.map(fn, work))
