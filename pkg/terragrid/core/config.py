# terragrid/core/config.py
"""Configuration module."""

from terragrid.core.grid import DEFAULT_EARTH_RADIUS_KM, DEFAULT_SPACING_KM, GridSpec, make_grid_spec

OUTPUT_FORMATS = ("csv", "jsonl", "geojson", "text")


class Config:
    """Settings for one command-line invocation.

    Built from parsed flags only; the command line never reads the environment.
    """

    def __init__(
        self,
        spacing_km: float = DEFAULT_SPACING_KM,
        earth_radius_km: float = DEFAULT_EARTH_RADIUS_KM,
        output_format=None,
        quiet: bool = False,
        log_file=None,
        workers: int = 1,
    ):
        # Grid
        self.SPACING_KM = spacing_km
        self.EARTH_RADIUS_KM = earth_radius_km

        # Output (None = the subcommand's own default)
        self.OUTPUT_FORMAT = output_format
        self.QUIET = quiet
        self.LOG_FILE = log_file

        # Sampler campaigns
        self.WORKERS = workers

        self._spec = None

    @classmethod
    def from_args(cls, args) -> "Config":
        return cls(
            spacing_km=getattr(args, "spacing_km", DEFAULT_SPACING_KM),
            earth_radius_km=getattr(args, "earth_radius_km", DEFAULT_EARTH_RADIUS_KM),
            output_format=getattr(args, "format", None),
            quiet=getattr(args, "quiet", False),
            log_file=getattr(args, "log_file", None),
            workers=getattr(args, "workers", 1),
        )

    def grid_spec(self) -> GridSpec:
        """GridSpec for these settings, built once per Config."""
        if self._spec is None:
            self._spec = make_grid_spec(self.SPACING_KM, self.EARTH_RADIUS_KM)
        return self._spec

    def output_format(self, default: str) -> str:
        return self.OUTPUT_FORMAT or default

    def __repr__(self):
        return (
            f"<Config spacing_km={self.SPACING_KM} earth_radius_km={self.EARTH_RADIUS_KM} "
            f"format={self.OUTPUT_FORMAT} workers={self.WORKERS}>"
        )
