"""Paired statistics, normality, multiple comparisons, correlations and power-law fits."""

from .battery import BatteryConfig, StatReport, conclude, read_reports, run_metric_battery, write_reports
from .inference import (
    GROUP1_LARGER,
    GROUP1_SMALLER,
    NO_DIRECTION,
    DegenerateSampleError,
    bonferroni,
    correlation_p,
    dagostino_k2,
    mcnemar,
    midranks,
    paired_t_test,
    pearson,
    spearman,
    welch_t_test,
    wilcoxon_signed_rank,
)
from .powerlaw import PowerLawError, PowerLawFit, powerlaw_fit, sample_powerlaw

__all__ = [
    "BatteryConfig",
    "DegenerateSampleError",
    "GROUP1_LARGER",
    "GROUP1_SMALLER",
    "NO_DIRECTION",
    "PowerLawError",
    "PowerLawFit",
    "StatReport",
    "bonferroni",
    "conclude",
    "correlation_p",
    "dagostino_k2",
    "mcnemar",
    "midranks",
    "paired_t_test",
    "pearson",
    "powerlaw_fit",
    "read_reports",
    "run_metric_battery",
    "sample_powerlaw",
    "spearman",
    "welch_t_test",
    "wilcoxon_signed_rank",
    "write_reports",
]
