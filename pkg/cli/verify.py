"""
CLI command handler for the bundled regression comparisons.
"""

import os

import click
import pandas as pd

from cli.options import reported_errors
from core.errors import ComparisonFailure
from core.evaluation import ComparisonPipeline
from core.export import write_report_json

DEFAULT_CASES = os.path.join(
    os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data", "comparison_cases.json"
)


@click.command("verify")
@click.option("--cases", type=click.Path(dir_okay=False), default=DEFAULT_CASES, show_default=True,
              help="JSON list of comparison cases")
@click.option("--out", type=click.Path(file_okay=False), help="Write the reports to this directory")
@click.pass_context
def cmd_verify(ctx: click.Context, cases: str, out: str):
    """
    Run every comparison case and print a Pass/Fail table.

    Examples:
        qw verify
        qw verify --cases my_cases.json --out results/verify
    """
    with reported_errors(ctx, "verifying routes"):
        pipeline = ComparisonPipeline(cases)
        click.echo(f"🔄 Running {len(pipeline.dataset)} comparison cases from {cases}...")
        reports = pipeline.run_cases()

        table = pd.DataFrame([
            {
                "case": report.name,
                "routes": " vs ".join(route.value for route in report.routes),
                "max_norm": f"{report.max_norm:.2e}",
                "tolerance": f"{report.tolerance:.0e}",
                "judgment": report.judgment,
            }
            for report in reports
        ])
        click.echo(table.to_string(index=False))

        if out:
            path = write_report_json([report.to_dict() for report in reports], os.path.join(out, "verify_report.json"))
            click.echo(f"📄 Reports saved to {path}")

        failed = [report.name for report in reports if not report.passed]
        if failed:
            raise ComparisonFailure(f"{len(failed)} case(s) failed: {', '.join(failed)}")
        click.echo(f"✅ All {len(reports)} cases pass")
