# terragrid/core/sampler.py
"""
Per-cell scene selection.

For each cell a time window is drawn, candidate scenes are ordered from least
to most cloudy by their bundled (rough) mask, and inspected one by one until
one passes the refined cloud and no-data checks. After ``fallback_after``
inspections without success the least cloudy inspected scene is accepted if
it stays under the relaxed ceiling.

Randomness comes only from the seed: every cell draws from its own PCG64
stream seeded by ``SeedSequence(seed, spawn_key=(key,))`` where ``key`` is the
first 8 bytes (big-endian) of SHA-256 over the canonical cell id.
"""

import hashlib
import logging
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timedelta
from enum import Enum
from typing import Any, Dict, List, Mapping, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from dateutil.relativedelta import relativedelta
from tqdm import tqdm

from terragrid.core.catalog import MetadataRecord
from terragrid.core.errors import InvalidParameterError
from terragrid.core.grid import CellId, format_cell, parse_cell
from terragrid.core.provider import Inspection, SceneCandidate, SceneProvider
from terragrid.utils.timestamps import format_timestamp, parse_optional_timestamp, parse_timestamp

logger = logging.getLogger(__name__)

_SEED_LIMIT = 2**64


@dataclass(frozen=True)
class SamplerConfig:
    availability_range: Tuple[datetime, datetime]
    seed: int = 0
    window_months: int = 4
    accept_cloud: float = 0.25
    fallback_cloud: float = 0.50
    fallback_after: int = 50
    max_nodata: float = 0.05
    source: str = "S2-L1C"

    def __post_init__(self):
        if not 0 <= self.seed < _SEED_LIMIT:
            raise InvalidParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if not 0.0 <= self.accept_cloud <= self.fallback_cloud <= 1.0:
            raise InvalidParameterError(
                f"Need 0 <= accept_cloud ({self.accept_cloud}) <= fallback_cloud "
                f"({self.fallback_cloud}) <= 1"
            )
        if self.fallback_after < 1:
            raise InvalidParameterError(f"fallback_after must be >= 1, got {self.fallback_after}")
        if self.window_months < 1:
            raise InvalidParameterError(f"window_months must be >= 1, got {self.window_months}")
        if not (math.isfinite(self.max_nodata) and 0.0 <= self.max_nodata <= 1.0):
            raise InvalidParameterError(f"max_nodata must lie in [0, 1], got {self.max_nodata}")

        start, end = self.availability_range
        start, end = parse_timestamp(start), parse_timestamp(end)
        object.__setattr__(self, "availability_range", (start, end))
        if start + relativedelta(months=self.window_months) > end:
            raise InvalidParameterError(
                f"A {self.window_months}-month window does not fit in "
                f"{format_timestamp(start)} .. {format_timestamp(end)}"
            )


class Outcome(str, Enum):
    SELECTED = "selected"
    UNSAMPLED = "unsampled"


@dataclass(frozen=True)
class InspectionLog:
    scene_id: str
    rough_cloud: float
    refined_cloud: Optional[float] = None
    nodata_fraction: Optional[float] = None
    error: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scene_id": self.scene_id,
            "rough_cloud": self.rough_cloud,
            "refined_cloud": self.refined_cloud,
            "nodata_fraction": self.nodata_fraction,
            "error": self.error,
        }


@dataclass(frozen=True)
class SelectionResult:
    cell: CellId
    outcome: Outcome
    window: Tuple[datetime, datetime]
    scenes_inspected: int
    fallback_used: bool = False
    scene_id: Optional[str] = None
    acquired: Optional[datetime] = None
    refined_cloud: Optional[float] = None
    nodata_fraction: Optional[float] = None
    log: Tuple[InspectionLog, ...] = field(default_factory=tuple)

    @property
    def selected(self) -> bool:
        return self.outcome is Outcome.SELECTED

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cell": format_cell(self.cell),
            "outcome": self.outcome.value,
            "scene_id": self.scene_id,
            "acquired": format_timestamp(self.acquired) if self.acquired else None,
            "refined_cloud": self.refined_cloud,
            "nodata_fraction": self.nodata_fraction,
            "scenes_inspected": self.scenes_inspected,
            "fallback_used": self.fallback_used,
            "window": [format_timestamp(self.window[0]), format_timestamp(self.window[1])],
            "log": [entry.to_dict() for entry in self.log],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SelectionResult":
        try:
            return cls(
                cell=parse_cell(data["cell"]),
                outcome=Outcome(data["outcome"]),
                window=(parse_timestamp(data["window"][0]), parse_timestamp(data["window"][1])),
                scenes_inspected=int(data["scenes_inspected"]),
                fallback_used=bool(data.get("fallback_used", False)),
                scene_id=data.get("scene_id"),
                acquired=parse_optional_timestamp(data.get("acquired")),
                refined_cloud=data.get("refined_cloud"),
                nodata_fraction=data.get("nodata_fraction"),
                log=tuple(InspectionLog(**entry) for entry in data.get("log", ())),
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InvalidParameterError(f"Malformed selection result: {e!r}") from e


# ============================================================================
# Randomness and windows
# ============================================================================


def cell_rng(seed: int, cell: CellId) -> np.random.Generator:
    """Independent, reproducible stream for one cell under one seed."""
    digest = hashlib.sha256(format_cell(cell).encode("utf-8")).digest()
    key = int.from_bytes(digest[:8], "big")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(key,))))


def draw_window(config: SamplerConfig, rng: np.random.Generator) -> Tuple[datetime, datetime]:
    """Window of window_months calendar months, start uniform over feasible days."""
    start, end = config.availability_range
    months = relativedelta(months=config.window_months)
    # end - months can land before start when month lengths differ (Jan 31 + 1 month)
    feasible_days = max(0, ((end - months) - start).days)
    offset = int(rng.integers(0, feasible_days, endpoint=True))
    window_start = start + timedelta(days=offset)
    return window_start, window_start + months


# ============================================================================
# Selection
# ============================================================================


def _candidate_order(candidate: SceneCandidate):
    return (candidate.rough_cloud, candidate.acquired, candidate.scene_id)


def _selected(
    cell, window, inspected, log, candidate: SceneCandidate, inspection: Inspection, fallback: bool
) -> SelectionResult:
    return SelectionResult(
        cell=cell,
        outcome=Outcome.SELECTED,
        window=window,
        scenes_inspected=inspected,
        fallback_used=fallback,
        scene_id=candidate.scene_id,
        acquired=candidate.acquired,
        refined_cloud=inspection.refined_cloud,
        nodata_fraction=inspection.nodata_fraction,
        log=tuple(log),
    )


def select_scene(
    cell: CellId,
    provider: SceneProvider,
    config: SamplerConfig,
    rng: Optional[np.random.Generator] = None,
) -> SelectionResult:
    """Pick one scene for a cell, or report it unsampled."""
    rng = rng if rng is not None else cell_rng(config.seed, cell)
    window = draw_window(config, rng)
    candidates = sorted(provider.list_candidates(cell, *window), key=_candidate_order)

    log: List[InspectionLog] = []
    best: Optional[Tuple[SceneCandidate, Inspection]] = None
    inspected = 0

    for candidate in candidates:
        inspected += 1
        try:
            inspection = provider.inspect(cell, candidate.scene_id)
        except Exception as e:
            logger.warning(f"Inspection of {candidate.scene_id} for {cell} failed: {e}")
            log.append(InspectionLog(candidate.scene_id, candidate.rough_cloud, error=str(e)))
        else:
            log.append(
                InspectionLog(
                    candidate.scene_id,
                    candidate.rough_cloud,
                    refined_cloud=inspection.refined_cloud,
                    nodata_fraction=inspection.nodata_fraction,
                )
            )
            if inspection.nodata_fraction <= config.max_nodata:
                if inspection.refined_cloud < config.accept_cloud:
                    return _selected(cell, window, inspected, log, candidate, inspection, False)
                if best is None or inspection.refined_cloud < best[1].refined_cloud:
                    best = (candidate, inspection)

        # Relaxed ceiling once enough scenes have been tried
        if (
            inspected >= config.fallback_after
            and best is not None
            and best[1].refined_cloud < config.fallback_cloud
        ):
            logger.debug(f"Fallback for {cell} after {inspected} scenes: {best[0].scene_id}")
            return _selected(cell, window, inspected, log, best[0], best[1], True)

    return SelectionResult(
        cell=cell,
        outcome=Outcome.UNSAMPLED,
        window=window,
        scenes_inspected=inspected,
        log=tuple(log),
    )


class CampaignResult(NamedTuple):
    results: List[SelectionResult]
    records: List[MetadataRecord]


def _record_for(result: SelectionResult, source: str) -> MetadataRecord:
    return MetadataRecord(
        cell=result.cell,
        source=source,
        product_id=result.scene_id,
        time_start=result.acquired,
        cloud_fraction=result.refined_cloud,
        nodata_fraction=result.nodata_fraction,
    )


def run_campaign(
    cells: Sequence[CellId],
    provider: SceneProvider,
    config: SamplerConfig,
    workers: int = 1,
    progress: bool = False,
) -> CampaignResult:
    """Run select_scene for every cell; output order follows the input order."""
    cells = list(cells)
    if workers < 1:
        raise InvalidParameterError(f"workers must be >= 1, got {workers}")
    if workers > 1 and not getattr(provider, "concurrent_safe", False):
        logger.info("Provider is not concurrent-safe, running campaign serially")
        workers = 1

    logger.info(f"🛰️ Campaign over {len(cells)} cells (seed={config.seed}, workers={workers})")

    def run_one(cell: CellId) -> SelectionResult:
        return select_scene(cell, provider, config)

    with tqdm(total=len(cells), disable=not progress, file=sys.stderr, unit="cell") as bar:
        if workers == 1:
            results = []
            for cell in cells:
                results.append(run_one(cell))
                bar.update(1)
        else:
            with ThreadPoolExecutor(max_workers=workers, thread_name_prefix="campaign") as pool:
                results = []
                for result in pool.map(run_one, cells):
                    results.append(result)
                    bar.update(1)

    records = [_record_for(result, config.source) for result in results if result.selected]
    logger.info(f"✅ Campaign done: {len(records)}/{len(cells)} cells selected")
    return CampaignResult(results, records)


@dataclass(frozen=True)
class CampaignStats:
    selected_count: int
    unsampled_count: int
    mean_cloud: Optional[float]
    median_cloud: Optional[float]
    fallback_rate: Optional[float]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "selected_count": self.selected_count,
            "unsampled_count": self.unsampled_count,
            "mean_cloud": self.mean_cloud,
            "median_cloud": self.median_cloud,
            "fallback_rate": self.fallback_rate,
        }


def campaign_stats(results: Sequence[SelectionResult]) -> CampaignStats:
    """Cloud statistics over selected results; absent (None) when nothing was selected."""
    selected = [result for result in results if result.selected]
    unsampled = len(results) - len(selected)
    if not selected:
        return CampaignStats(0, unsampled, None, None, None)

    clouds = sorted(result.refined_cloud for result in selected)
    return CampaignStats(
        selected_count=len(selected),
        unsampled_count=unsampled,
        mean_cloud=math.fsum(clouds) / len(clouds),
        median_cloud=clouds[(len(clouds) - 1) // 2],
        fallback_rate=sum(1 for result in selected if result.fallback_used) / len(selected),
    )
