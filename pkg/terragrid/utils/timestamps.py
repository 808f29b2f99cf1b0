# terragrid/utils/timestamps.py
"""UTC timestamp parsing and formatting. Depends on terragrid.core.errors only."""

from datetime import datetime, timezone
from typing import Optional

from dateutil.parser import isoparse

from terragrid.core.errors import InvalidParameterError

TIMESTAMP_FORMAT = "%Y-%m-%dT%H:%M:%SZ"


def parse_timestamp(value) -> datetime:
    """Parse an ISO-8601 timestamp into an aware UTC datetime, truncated to seconds.

    Naive timestamps are taken to be UTC already.
    """
    if isinstance(value, datetime):
        parsed = value
    elif isinstance(value, str) and value.strip():
        try:
            parsed = isoparse(value.strip())
        except (ValueError, OverflowError) as e:
            raise InvalidParameterError(f"Invalid timestamp '{value}': {e}") from e
    else:
        raise InvalidParameterError(f"Invalid timestamp {value!r}")

    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=timezone.utc)
    return parsed.astimezone(timezone.utc).replace(microsecond=0)


def parse_optional_timestamp(value) -> Optional[datetime]:
    if value is None or value == "":
        return None
    return parse_timestamp(value)


def format_timestamp(value: datetime) -> str:
    return value.astimezone(timezone.utc).strftime(TIMESTAMP_FORMAT)


def epoch_seconds(value: datetime) -> int:
    return int(value.timestamp())
