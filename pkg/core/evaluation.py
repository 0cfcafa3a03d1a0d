import json
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import jsonschema

from core.config import RunConfig, load_run_config
from core.ensemble import averaged_distribution
from core.errors import ConfigurationError
from core.observables import deviation_profile, l1_distance, max_deviation, pad_to
from core.routes import compute_distribution
from core.schemas import COMPARISON_CASES_SCHEMA, COMPARISON_REPORT_SCHEMA
from core.state import MomentumDistribution, RatchetSpec, Route

logger = logging.getLogger(__name__)


def distribution_for(run: RunConfig, route: Route) -> MomentumDistribution:
    """One route's distribution for a run, ensemble-averaged when fwhm > 0."""
    if run.uses_ensemble:
        return averaged_distribution(run.walk, run.ratchet, run.ensemble_spec(route), workers=run.workers)
    return compute_distribution(run.walk, run.ratchet, route)


def excluded_classes(ratchet: RatchetSpec) -> List[int]:
    """Classes left out of the excluded norms: 0, 1 and every initial class."""
    return sorted(set(ratchet.classes) | {0, 1})


@dataclass
class ComparisonReport:
    """Distances between two routes for one run, with a Pass/Fail judgment."""

    routes: Tuple[Route, Route]
    config: Dict
    max_norm: float
    l1: float
    max_norm_excluded: float
    l1_excluded: float
    excluded_classes: List[int]
    worst_n: int
    initial_deviation: Dict[str, float]
    tolerance: float
    exclude_initial: bool
    judgment: str
    name: str = ""
    distributions: Tuple[MomentumDistribution, ...] = field(default=(), repr=False)

    @property
    def passed(self) -> bool:
        return self.judgment == "Pass"

    def to_dict(self) -> Dict:
        report = {
            "name": self.name,
            "routes": [route.value for route in self.routes],
            "config": self.config,
            "max_norm": self.max_norm,
            "l1": self.l1,
            "max_norm_excluded": self.max_norm_excluded,
            "l1_excluded": self.l1_excluded,
            "excluded_classes": self.excluded_classes,
            "worst_n": self.worst_n,
            "initial_deviation": self.initial_deviation,
            "tolerance": self.tolerance,
            "exclude_initial": self.exclude_initial,
            "judgment": self.judgment,
        }
        jsonschema.validate(report, COMPARISON_REPORT_SCHEMA)
        return report


class ComparisonPipeline:
    """
    Cross-route comparison of momentum distributions.

    Each case runs two routes on the same configuration and judges the
    max-norm distance against the configured tolerance.
    """

    def __init__(self, dataset_path: Optional[str] = None):
        """
        Initialize the pipeline, optionally with a file of comparison cases.

        Args:
            dataset_path: JSON list of {"name", "config"} cases.
        """
        self.dataset_path = dataset_path
        self.dataset = self._load_dataset() if dataset_path else []

    def _load_dataset(self) -> List[Dict]:
        """
        Load the comparison cases from a JSON file.

        Returns:
            List of cases.
        """
        try:
            with open(self.dataset_path, "r") as f:
                cases = json.load(f)
        except FileNotFoundError as e:
            raise ConfigurationError(f"comparison cases not found: {self.dataset_path}") from e
        try:
            jsonschema.validate(cases, COMPARISON_CASES_SCHEMA)
        except jsonschema.ValidationError as e:
            raise ConfigurationError(f"invalid comparison cases: {e.message}") from e
        return cases

    def judge(self, max_norm: float, max_norm_excluded: float, tolerance: float, exclude_initial: bool) -> str:
        """
        Judge a comparison against its tolerance.

        Returns:
            'Pass' or 'Fail'.
        """
        measured = max_norm_excluded if exclude_initial else max_norm
        return "Pass" if measured <= tolerance else "Fail"

    @staticmethod
    def routes_of(run: RunConfig) -> Tuple[Route, Route]:
        against = run.against or Route.SIMULATION
        if against is run.route:
            raise ConfigurationError(
                f"compare needs two different routes, got {run.route.value} twice; set --against"
            )
        return run.route, against

    def compare(self, run: RunConfig, name: str = "") -> ComparisonReport:
        """
        Run both routes of ``run`` and measure their distance.

        Args:
            run: Resolved run configuration; ``route`` and ``against`` pick the routes
            name: Label carried into the report

        Returns:
            ComparisonReport with its judgment
        """
        first_route, second_route = self.routes_of(run)
        first = distribution_for(run, first_route)
        second = distribution_for(run, second_route)
        cutoff = max(first.cutoff, second.cutoff)
        first, second = pad_to(first, cutoff), pad_to(second, cutoff)

        excluded = excluded_classes(run.ratchet)
        profile = deviation_profile(first, second)
        max_norm = float(profile.max())
        max_norm_excluded = max_deviation(first, second, exclude=excluded)
        initial_deviation = {
            str(n): float(profile[n + cutoff]) for n in excluded if abs(n) <= cutoff
        }

        report = ComparisonReport(
            name=name,
            routes=(first_route, second_route),
            config=run.to_dict(),
            max_norm=max_norm,
            l1=l1_distance(first, second),
            max_norm_excluded=max_norm_excluded,
            l1_excluded=l1_distance(first, second, exclude=excluded),
            excluded_classes=excluded,
            worst_n=int(first.grid[int(profile.argmax())]),
            initial_deviation=initial_deviation,
            tolerance=run.tolerance,
            exclude_initial=run.exclude_initial,
            judgment=self.judge(max_norm, max_norm_excluded, run.tolerance, run.exclude_initial),
            distributions=(first, second),
        )
        logger.info(
            "%s vs %s: max-norm %.3e, L1 %.3e -> %s",
            first_route.value,
            second_route.value,
            max_norm,
            report.l1,
            report.judgment,
        )
        return report

    def run_cases(self) -> List[ComparisonReport]:
        """
        Run every case of the dataset.

        Returns:
            One report per case, in file order.
        """
        reports = []
        for case in self.dataset:
            run = load_run_config(path=None, overrides=case["config"])
            reports.append(self.compare(run, name=case["name"]))
        return reports
