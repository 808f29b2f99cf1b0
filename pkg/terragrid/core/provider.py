# terragrid/core/provider.py
"""Scene provider contract and the file-backed synthetic provider."""

import json
import logging
import math
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import IO, Dict, Iterable, List, Mapping, Optional, Protocol, Tuple

from terragrid.core.errors import InvalidParameterError, ProviderError
from terragrid.core.grid import CellId, parse_cell
from terragrid.utils.timestamps import parse_timestamp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SceneCandidate:
    """A scene listed for a cell. Refined values stay empty until inspection."""

    scene_id: str
    acquired: datetime
    rough_cloud: float
    refined_cloud: Optional[float] = None
    nodata_fraction: Optional[float] = None


@dataclass(frozen=True)
class Inspection:
    """Values revealed by downloading a scene over the cell and masking it."""

    refined_cloud: float
    nodata_fraction: float


class SceneProvider(Protocol):
    """Two capabilities: list candidates in a window, inspect one candidate.

    ``concurrent_safe`` declares whether inspect may be called from several
    threads at once; campaigns run serially otherwise.
    """

    concurrent_safe: bool

    def list_candidates(self, cell: CellId, start: datetime, end: datetime) -> List[SceneCandidate]:
        ...

    def inspect(self, cell: CellId, scene_id: str) -> Inspection:
        ...


def _fraction(data: Mapping, name: str, required: bool) -> Optional[float]:
    value = data.get(name)
    if value is None or value == "":
        if required:
            raise InvalidParameterError(f"missing required field '{name}'")
        return None
    value = float(value)
    if not (math.isfinite(value) and 0.0 <= value <= 1.0):
        raise InvalidParameterError(f"{name}: fraction out of range ({value})")
    return value


class SyntheticProvider:
    """Provider backed by JSONL rows of
    {cell, scene_id, acquired, rough_cloud, refined_cloud, nodata_fraction}.

    A row without refined_cloud makes inspection of that scene fail. A missing
    nodata_fraction is read as 0.
    """

    concurrent_safe = True

    def __init__(self, rows: Iterable[Mapping] = ()):
        self._candidates: Dict[CellId, List[SceneCandidate]] = {}
        self._hidden: Dict[Tuple[CellId, str], Optional[Inspection]] = {}
        for index, row in enumerate(rows, start=1):
            try:
                self._add(row)
            except (KeyError, TypeError, ValueError) as e:
                raise InvalidParameterError(f"Bad provider row {index}: {e}") from e
        logger.info(
            f"Synthetic provider loaded {len(self._hidden)} scenes over {len(self._candidates)} cells"
        )

    def _add(self, row: Mapping):
        cell = parse_cell(row["cell"])
        scene_id = str(row["scene_id"])
        if (cell, scene_id) in self._hidden:
            raise InvalidParameterError(f"duplicate scene {scene_id} for cell {cell}")

        candidate = SceneCandidate(
            scene_id=scene_id,
            acquired=parse_timestamp(row["acquired"]),
            rough_cloud=_fraction(row, "rough_cloud", required=True),
        )
        refined = _fraction(row, "refined_cloud", required=False)
        nodata = _fraction(row, "nodata_fraction", required=False)
        self._candidates.setdefault(cell, []).append(candidate)
        self._hidden[(cell, scene_id)] = (
            Inspection(refined_cloud=refined, nodata_fraction=nodata or 0.0)
            if refined is not None
            else None
        )

    @classmethod
    def from_stream(cls, stream: IO[str]) -> "SyntheticProvider":
        rows = []
        for line_number, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                rows.append(json.loads(line))
            except json.JSONDecodeError as e:
                raise InvalidParameterError(
                    f"Provider file line {line_number} is not valid JSON: {e.msg}"
                ) from e
        return cls(rows)

    @classmethod
    def from_file(cls, path) -> "SyntheticProvider":
        with open(Path(path), encoding="utf-8") as stream:
            return cls.from_stream(stream)

    def list_candidates(self, cell: CellId, start: datetime, end: datetime) -> List[SceneCandidate]:
        return [c for c in self._candidates.get(cell, ()) if start <= c.acquired < end]

    def inspect(self, cell: CellId, scene_id: str) -> Inspection:
        if (cell, scene_id) not in self._hidden:
            raise ProviderError(f"Unknown scene {scene_id} for cell {cell}")
        inspection = self._hidden[(cell, scene_id)]
        if inspection is None:
            raise ProviderError(f"Scene {scene_id} could not be masked")
        return inspection
