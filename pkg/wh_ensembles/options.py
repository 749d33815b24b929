import os
from typing import List, Optional, Sequence, Tuple

from . import __version__, constants
from .exceptions import ArgumentDomainError, EnsembleException


def workers_from_environment() -> int:
    value = os.environ.get('WH_ENSEMBLES_WORKERS')
    if not value:
        return 1
    try:
        return int(value)
    except ValueError:
        raise EnsembleException(f"`WH_ENSEMBLES_WORKERS` must be an integer, got `{value}`") from None


class ExperimentConfig:

    def __init__(self) -> None:
        self.opt_command: str = ""
        self.opt_window: str = "hermite:0"
        self.opt_domain: Optional[str] = None
        self.opt_basis: Optional[int] = None
        self.opt_quad: Optional[int] = None
        self.opt_seed: int = constants.DEFAULT_SEED
        self.opt_out: str = "."
        self.opt_samples: int = constants.DEFAULT_SAMPLES
        self.opt_svg: bool = False
        self.opt_check: bool = False
        self.opt_strict: bool = False
        self.opt_workers: int = workers_from_environment()
        self.opt_r: int = 0
        self.opt_n: List[int] = []
        self.opt_areas: List[float] = []
        self.opt_delta: float = 0.5
        self.opt_grid: int = constants.DEFAULT_GRID
        self.opt_area: Optional[float] = None
        self.opt_scales: List[float] = []

    def validate(self) -> None:
        if self.opt_basis is not None and self.opt_basis < 1:
            raise ArgumentDomainError(f"Option `--basis` must be positive, got {self.opt_basis}.")
        if self.opt_quad is not None and self.opt_quad < 1:
            raise ArgumentDomainError(f"Option `--quad` must be positive, got {self.opt_quad}.")
        if not 0 <= self.opt_seed < 2 ** 64:
            raise ArgumentDomainError(f"Option `--seed` must be an unsigned 64-bit integer, got {self.opt_seed}.")
        if self.opt_samples < 0:
            raise ArgumentDomainError(f"Option `--samples` must be non-negative, got {self.opt_samples}.")
        if self.opt_workers < 1:
            raise ArgumentDomainError(f"Number of workers must be positive, got {self.opt_workers}.")
        if self.opt_r < 0:
            raise ArgumentDomainError(f"Option `--r` must be non-negative, got {self.opt_r}.")
        if any(n < 1 for n in self.opt_n):
            raise ArgumentDomainError(f"Option `--N` takes positive integers, got {self.opt_n}.")
        if any(not area > 0 for area in self.opt_areas):
            raise ArgumentDomainError(f"Option `--areas` takes positive numbers, got {self.opt_areas}.")
        if not 0 < self.opt_delta < 1:
            raise ArgumentDomainError(f"Option `--delta` must lie in (0, 1), got {self.opt_delta}.")
        if self.opt_grid < 2:
            raise ArgumentDomainError(f"Option `--grid` must be at least 2, got {self.opt_grid}.")
        if any(not m > 0 for m in self.opt_scales):
            raise ArgumentDomainError(f"Option `--scales` takes positive numbers, got {self.opt_scales}.")
        if self.opt_area is not None:
            if not self.opt_area > 0:
                raise ArgumentDomainError(f"Option `--area` must be positive, got {self.opt_area}.")
            if len(self.opt_n) != 1:
                raise ArgumentDomainError("Option `--area` can only be specified together with a single value of `--N`.")

    def provenance(self) -> List[Tuple[str, str]]:
        """Settings echoed into every output header; excludes what cannot change the numbers (output directory, workers)."""
        def joined(values: Sequence[float]) -> str:
            return ",".join(map(repr, values))

        return [
            ("wh-ensembles", __version__),
            ("command", self.opt_command),
            ("window", self.opt_window),
            ("domain", self.opt_domain or ""),
            ("basis", "" if self.opt_basis is None else str(self.opt_basis)),
            ("quad", "" if self.opt_quad is None else str(self.opt_quad)),
            ("seed", str(self.opt_seed)),
            ("samples", str(self.opt_samples)),
            ("r", str(self.opt_r)),
            ("N", joined(self.opt_n)),
            ("areas", joined(self.opt_areas)),
            ("delta", repr(self.opt_delta)),
            ("grid", str(self.opt_grid)),
            ("area", "" if self.opt_area is None else repr(self.opt_area)),
            ("scales", joined(self.opt_scales)),
            ("check", str(self.opt_check).lower()),
        ]

    def __repr__(self) -> str:  # pragma: no cover; debug only
        return "ExperimentConfig(" + ", ".join(f"{k}={v}" for k, v in vars(self).items()) + ")"
