"""
File emission: distribution CSVs with a provenance header, JSON reports and
optional SVG plots. Nothing written here depends on the wall clock, so the
same inputs always give the same bytes.
"""

import json
import logging
import os
from typing import Any, Dict, Optional, Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import pandas as pd  # noqa: E402

from core.state import MomentumDistribution  # noqa: E402

logger = logging.getLogger(__name__)

SVG_HASH_SALT = "kicked-walk"
FLOAT_FORMAT = "%.17g"


def output_name(dist: MomentumDistribution, suffix: str = "csv", fwhm: float = 0.0) -> str:
    """<route>_k<k>_T<T>_beta<β>[_fwhm<f>].<suffix>"""
    config = dist.config
    if config is None:
        raise ValueError("distribution carries no walk config to name its file")
    name = f"{dist.route.value}_k{config.kick_strength:g}_T{config.steps}_beta{config.quasimomentum:g}"
    if fwhm > 0:
        name += f"_fwhm{fwhm:g}"
    return f"{name}.{suffix}"


def provenance_header(provenance: Dict[str, Any]) -> str:
    lines = json.dumps(provenance, indent=2, sort_keys=True, default=str).splitlines()
    return "".join(f"# {line}\n" for line in lines)


def write_distribution_csv(
    dist: MomentumDistribution,
    path: str,
    provenance: Optional[Dict[str, Any]] = None,
) -> str:
    """
    Write n, P, P1, P2 under a commented JSON header.

    Args:
        dist: Distribution to write
        path: Target file; parent directories are created
        provenance: Resolved run config and anything else worth recording

    Returns:
        The path written
    """
    header = {"route": dist.route.value, "distribution": dist.metadata()}
    if provenance:
        header["run"] = provenance
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(provenance_header(header))
        dist.to_frame().to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.info("wrote %s", path)
    return path


def read_distribution_csv(path: str) -> pd.DataFrame:
    return pd.read_csv(path, comment="#", float_precision="round_trip")


def write_report_json(report: Any, path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as f:
        json.dump(report, f, indent=2, sort_keys=True)
        f.write("\n")
    return path


def write_table_csv(frame: pd.DataFrame, path: str, provenance: Optional[Dict[str, Any]] = None) -> str:
    """Write a summary table, with the same header convention as distributions."""
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", newline="") as f:
        if provenance:
            f.write(provenance_header(provenance))
        frame.to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return path


def write_distribution_svg(
    dists: Sequence[MomentumDistribution],
    path: str,
    title: str = "",
    labels: Optional[Sequence[str]] = None,
) -> str:
    """
    Plot P(n): the first distribution as bars, the rest as lines on top.
    """
    if not dists:
        raise ValueError("nothing to plot")
    labels = list(labels) if labels else [d.route.value for d in dists]
    plt.rcParams["svg.hashsalt"] = SVG_HASH_SALT

    fig, ax = plt.subplots(figsize=(8, 4.5))
    first = dists[0]
    ax.bar(first.grid, first.p, width=0.8, color="#9ecae1", label=labels[0])
    for dist, label in zip(dists[1:], labels[1:]):
        ax.plot(dist.grid, dist.p, marker="o", markersize=3, linewidth=1.0, label=label)
    ax.axvline(0, color="0.4", linewidth=0.8)
    ax.grid(True, linestyle=":", linewidth=0.6)
    ax.set_xlabel("momentum class n")
    ax.set_ylabel("P(n)")
    if title:
        ax.set_title(title)
    ax.legend(loc="upper right")

    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    fig.savefig(path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return path
