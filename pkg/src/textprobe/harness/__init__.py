"""Dataset ingestion, campaign orchestration, and the CLI."""

from textprobe.harness.campaign import (
    CampaignConfig,
    CampaignReport,
    ResultRecord,
    build_threat,
    compare_strategies,
    load_successful_cases,
    run_campaign,
)
from textprobe.harness.dataset import (
    DatasetRecord,
    example_span,
    load_dataset,
    render_input,
)

__all__ = [
    "CampaignConfig",
    "CampaignReport",
    "DatasetRecord",
    "ResultRecord",
    "build_threat",
    "compare_strategies",
    "example_span",
    "load_dataset",
    "load_successful_cases",
    "render_input",
    "run_campaign",
]
