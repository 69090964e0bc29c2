"""
DTOs
DESCRIÇÃO: Objetos de transferência dos relatórios gerados pelo toolkit
"""

from .report_dtos import (
    AblationReport,
    EpochRecord,
    GradcheckEntry,
    GradcheckReport,
    MetricsReport,
    RunSummary,
    SweepReport,
    TrainReport,
)

__all__ = [
    'AblationReport', 'EpochRecord', 'GradcheckEntry', 'GradcheckReport',
    'MetricsReport', 'RunSummary', 'SweepReport', 'TrainReport',
]
