"""
Route dispatch: maps a route tag to the engine computing its distribution.
"""

from typing import Callable, Dict, Union

from core.near_resonant import near_resonant_distribution
from core.quantum_map import walk
from core.resonant import resonant_distribution
from core.state import MomentumDistribution, RatchetSpec, Route, WalkConfig

Engine = Callable[[WalkConfig, RatchetSpec], MomentumDistribution]

ENGINES: Dict[Route, Engine] = {
    Route.SIMULATION: walk,
    Route.RESONANT: resonant_distribution,
    Route.NEAR_RESONANT: near_resonant_distribution,
}


def compute_distribution(
    config: WalkConfig,
    ratchet: RatchetSpec,
    route: Union[Route, str],
    check_validity: bool = True,
) -> MomentumDistribution:
    """Run one walk through the engine registered for ``route``."""
    route = Route(route)
    if route is Route.NEAR_RESONANT:
        return near_resonant_distribution(config, ratchet, check_validity=check_validity)
    return ENGINES[route](config, ratchet)
