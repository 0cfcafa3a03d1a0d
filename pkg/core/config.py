"""
Run configuration: defaults, the JSON config file and command-line overrides
merged into one validated RunConfig.
"""

import copy
import json
import math
from dataclasses import dataclass
from typing import Any, Dict, Mapping, Optional

import jsonschema

from core.ensemble import DEFAULT_SAMPLES, EnsembleSpec
from core.errors import ConfigurationError
from core.schemas import RUN_CONFIG_SCHEMA
from core.state import (
    RESONANT_PERIOD,
    FreeEvolutionMode,
    RatchetSpec,
    Route,
    WalkConfig,
)

DEFAULT_CONFIG_PATH = "config.json"

DEFAULT_DOCUMENT: Dict[str, Any] = {
    "walk": {
        "kick_strength": 2.0,
        "steps": 10,
        "quasimomentum": 0.0,
        "kick_period": RESONANT_PERIOD,
        "momentum_cutoff": None,
        "free_evolution_mode": FreeEvolutionMode.SIMPLIFIED.value,
    },
    "ratchet": {
        "classes": [0],
        "level_weights": [1.0 / math.sqrt(2.0), 1.0 / math.sqrt(2.0)],
        "ladder_phase": -math.pi / 2.0,
    },
    "ensemble": {
        "fwhm": 0.0,
        "n_samples": DEFAULT_SAMPLES,
        "seed": 0,
    },
    "run": {
        "route": Route.SIMULATION.value,
        "against": None,
        "out": "results",
        "plot": False,
        "tolerance": 1e-10,
        "exclude_initial": False,
        "workers": 1,
    },
}

# sweep axis -> (section, key)
SWEEP_AXES = {
    "k": ("walk", "kick_strength"),
    "steps": ("walk", "steps"),
    "beta": ("walk", "quasimomentum"),
    "fwhm": ("ensemble", "fwhm"),
}


def _deep_merge(base: Dict[str, Any], updates: Mapping[str, Any]) -> Dict[str, Any]:
    """Merge ``updates`` into ``base`` in place; None leaves a key unchanged."""
    for key, value in updates.items():
        if value is None:
            continue
        if isinstance(value, Mapping) and isinstance(base.get(key), dict):
            _deep_merge(base[key], value)
        else:
            base[key] = value
    return base


def _load_config(path: str, must_exist: bool = False) -> Dict[str, Any]:
    """Load the config document; an absent file means defaults unless ``must_exist``."""
    try:
        with open(path, "r") as f:
            return json.load(f)
    except FileNotFoundError as e:
        if must_exist:
            raise ConfigurationError(f"config file not found: {path}") from e
        return {}
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"{path} is not valid JSON: {e}") from e


@dataclass(frozen=True)
class RunConfig:
    """Everything one command needs: the walk, its initial state, ensemble and outputs."""

    walk: WalkConfig
    ratchet: RatchetSpec
    fwhm: float
    n_samples: int
    seed: int
    route: Route
    against: Optional[Route]
    out: str
    plot: bool
    tolerance: float
    exclude_initial: bool
    workers: int

    @classmethod
    def from_document(cls, document: Dict[str, Any]) -> "RunConfig":
        """Validate a complete config document and build the run from it."""
        try:
            jsonschema.validate(document, RUN_CONFIG_SCHEMA)
        except jsonschema.ValidationError as e:
            location = ".".join(str(part) for part in e.absolute_path) or "<root>"
            raise ConfigurationError(f"invalid run config at {location}: {e.message}") from e

        run = document["run"]
        ensemble = document["ensemble"]
        against = run.get("against")
        return cls(
            walk=WalkConfig(**document["walk"]),
            ratchet=RatchetSpec(
                classes=tuple(document["ratchet"]["classes"]),
                level_weights=tuple(document["ratchet"]["level_weights"]),
                ladder_phase=document["ratchet"]["ladder_phase"],
            ),
            fwhm=float(ensemble["fwhm"]),
            n_samples=int(ensemble["n_samples"]),
            seed=int(ensemble["seed"]),
            route=Route(run["route"]),
            against=Route(against) if against else None,
            out=run["out"],
            plot=bool(run["plot"]),
            tolerance=float(run["tolerance"]),
            exclude_initial=bool(run["exclude_initial"]),
            workers=int(run["workers"]),
        )

    @property
    def uses_ensemble(self) -> bool:
        return self.fwhm > 0

    def walk_config(self) -> WalkConfig:
        return self.walk

    def ratchet_spec(self) -> RatchetSpec:
        return self.ratchet

    def ensemble_spec(self, route: Optional[Route] = None) -> EnsembleSpec:
        return EnsembleSpec(
            fwhm=self.fwhm,
            n_samples=self.n_samples,
            seed=self.seed,
            route=route or self.route,
        )

    def with_parameter(self, axis: str, value: Any) -> "RunConfig":
        """Copy of this run with one sweep axis set to ``value``."""
        if axis not in SWEEP_AXES:
            raise ConfigurationError(f"unknown sweep axis {axis!r}; choose from {sorted(SWEEP_AXES)}")
        section, key = SWEEP_AXES[axis]
        document = self.to_dict()
        document[section][key] = int(value) if axis == "steps" else float(value)
        return RunConfig.from_document(document)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "walk": self.walk.to_dict(),
            "ratchet": self.ratchet.to_dict(),
            "ensemble": {"fwhm": self.fwhm, "n_samples": self.n_samples, "seed": self.seed},
            "run": {
                "route": self.route.value,
                "against": self.against.value if self.against else None,
                "out": self.out,
                "plot": self.plot,
                "tolerance": self.tolerance,
                "exclude_initial": self.exclude_initial,
                "workers": self.workers,
            },
        }


def load_run_config(
    path: Optional[str] = DEFAULT_CONFIG_PATH,
    overrides: Optional[Mapping[str, Any]] = None,
    must_exist: bool = False,
) -> RunConfig:
    """
    Resolve the run configuration.

    Args:
        path: JSON config file; a missing file means defaults only, None skips it
        overrides: Nested sections that win over the file (None values ignored)
        must_exist: Raise ConfigurationError when ``path`` is missing

    Returns:
        Validated RunConfig
    """
    document = copy.deepcopy(DEFAULT_DOCUMENT)
    if path is not None:
        _deep_merge(document, _load_config(path, must_exist))
    if overrides:
        _deep_merge(document, overrides)
    return RunConfig.from_document(document)
