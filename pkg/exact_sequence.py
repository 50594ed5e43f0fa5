"""
Exact plane partition numbers PL(n).

PL(n) is the coefficient of x**n in MacMahon's product prod (1 - x**k)**(-k).
Taking the logarithmic derivative, x f'(x)/f(x) = sum_k sigma_2(k) x**k, so

    n PL(n) = sum_{k=1}^{n} sigma_2(k) PL(n - k),

which gives every value with O(n**2) exact integer operations.
"""

import logging
import operator
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Union

import numpy as np
from tqdm import tqdm

from config import Config
from utils import CacheFormatError, CacheRangeError, InvalidArgumentError, log_operation

logger = logging.getLogger(__name__)

# sigma_2(k) < zeta(2) k**2, so int64 is safe well past this limit
SIGMA2_INT64_LIMIT = 2_000_000_000


@dataclass(frozen=True)
class Sigma2Table:
    """sigma_2(k) = sum of d**2 over divisors d of k, for 1 <= k <= limit."""

    limit: int
    values: np.ndarray

    def __getitem__(self, k: int) -> int:
        if not 1 <= k <= self.limit:
            raise CacheRangeError(f"sigma_2({k}) outside table 1..{self.limit}", k)
        return int(self.values[k])

    def as_list(self) -> List[int]:
        """Python ints, index 0 unused."""
        return [int(v) for v in self.values.tolist()]


def build_sigma2(limit: int) -> Sigma2Table:
    """Divisor sieve: add d**2 to every multiple of d."""
    if limit < 1:
        raise InvalidArgumentError(f"build_sigma2 needs limit >= 1, got {limit}")
    dtype = np.int64 if limit <= SIGMA2_INT64_LIMIT else object
    values = np.zeros(limit + 1, dtype=dtype)
    for d in range(1, limit + 1):
        values[d::d] += d * d
    values.flags.writeable = False
    return Sigma2Table(limit=limit, values=values)


@dataclass
class PlCache:
    """Append-only table of exact PL(0..limit)."""

    values: List[int] = field(default_factory=lambda: [1])
    source_path: Optional[Path] = None

    @property
    def limit(self) -> int:
        return len(self.values) - 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.limit:
            raise CacheRangeError(f"PL({n}) is outside the cache 0..{self.limit}", n)
        return self.values[n]

    def require(self, n: int) -> None:
        """Raise a range error naming the limit needed to reach n."""
        if n > self.limit:
            raise CacheRangeError(
                f"cache holds PL(0..{self.limit}); this needs PL up to {n}", n
            )


def extend_cache(cache: PlCache, new_limit: int, progress: Optional[bool] = None) -> PlCache:
    """Extend the cache in place to PL(0..new_limit) and return it."""
    if new_limit < cache.limit:
        raise InvalidArgumentError(
            f"new_limit {new_limit} is below the current limit {cache.limit}"
        )
    if new_limit == cache.limit:
        return cache

    start = cache.limit + 1
    sigma = build_sigma2(new_limit).as_list()
    values = cache.values
    show = Config.SHOW_PROGRESS if progress is None else progress
    log_operation("extend_cache", f"{start}..{new_limit}", level="DEBUG", logger=logger)

    for n in tqdm(range(start, new_limit + 1), disable=not show, desc="PL(n)", unit="n"):
        # values[n-1], values[n-2], ..., values[0] against sigma[1..n]
        total = sum(map(operator.mul, sigma[1:n + 1], reversed(values)))
        quotient, remainder = divmod(total, n)
        if remainder:
            raise ArithmeticError(f"recurrence produced a non-integer at n={n}")
        values.append(quotient)
    return cache


def pl_values(limit: int) -> PlCache:
    """Fresh cache holding PL(0..limit)."""
    return extend_cache(PlCache(), limit)


def save_cache(cache: PlCache, path: Union[str, Path]) -> None:
    path = Path(path)
    lines = [Config.CACHE_HEADER]
    lines.extend(f"{n}\t{value}" for n, value in enumerate(cache.values))
    tmp_path = path.with_name(path.name + ".tmp")
    tmp_path.write_text("\n".join(lines), encoding="ascii")
    tmp_path.replace(path)
    cache.source_path = path
    log_operation("save_cache", f"{path} (limit {cache.limit})", logger=logger)


def _recurrence_mismatch(values: List[int]) -> Optional[int]:
    """First n >= 1 where the stored values break n PL(n) = sum sigma_2(k) PL(n - k)."""
    if len(values) < 2:
        return None
    sigma = build_sigma2(len(values) - 1).as_list()
    for n in range(1, len(values)):
        if n * values[n] != sum(map(operator.mul, sigma[1:n + 1], reversed(values[:n]))):
            return n
    return None


def load_cache(path: Union[str, Path]) -> PlCache:
    path = Path(path)
    try:
        text = path.read_text(encoding="ascii")
    except UnicodeDecodeError as e:
        line_number = e.object[:e.start].count(b"\n") + 1
        raise CacheFormatError(f"non-ASCII byte {e.object[e.start]:#04x}", line_number) from e
    lines = text.split("\n")

    if not lines or lines[0] != Config.CACHE_HEADER:
        raise CacheFormatError(
            f"expected header {Config.CACHE_HEADER!r}, found {lines[0]!r}" if lines else "empty file", 1
        )

    values: List[int] = []
    for line_number, line in enumerate(lines[1:], start=2):
        parts = line.split("\t")
        if len(parts) != 2:
            raise CacheFormatError(f"expected '<n><TAB><digits>', found {line!r}", line_number)
        index_text, digits = parts
        if not index_text.isdigit() or int(index_text) != len(values):
            raise CacheFormatError(
                f"expected index {len(values)}, found {index_text!r}", line_number
            )
        if not digits.isdigit():
            raise CacheFormatError(f"non-decimal payload {digits!r}", line_number)
        values.append(int(digits))

    if not values:
        raise CacheFormatError("no entries after header", 2)
    if values[0] != 1:
        raise CacheFormatError("PL(0) must be 1", 2)
    broken = _recurrence_mismatch(values)
    if broken is not None:
        raise CacheFormatError(f"PL({broken}) = {values[broken]} breaks the recurrence", broken + 2)
    log_operation("load_cache", f"{path} (limit {len(values) - 1})", logger=logger)
    return PlCache(values=values, source_path=path)


def open_cache(path: Optional[Union[str, Path]], limit: int) -> PlCache:
    """Load the cache at path if it exists, extend it to limit, and save it back when it grew."""
    if path is not None and Path(path).exists():
        cache = load_cache(path)
    else:
        cache = PlCache(source_path=Path(path) if path else None)
    if limit > cache.limit:
        try:
            extend_cache(cache, limit)
        finally:
            if path is not None:
                save_cache(cache, path)
    return cache


def recurrence_residual(cache: PlCache, n: int, sigma: Optional[Sigma2Table] = None) -> int:
    """n PL(n) - sum sigma_2(k) PL(n-k); zero on a consistent cache."""
    cache.require(n)
    sigma = sigma or build_sigma2(max(n, 1))
    return n * cache[n] - sum(sigma[k] * cache[n - k] for k in range(1, n + 1))
