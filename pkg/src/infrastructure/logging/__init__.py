# src/infrastructure/logging/__init__.py
"""Módulo de logging e métricas de sessão."""

from .setup import setup_logging, parse_level, LOG_FORMAT
from .metrics_collector import MetricsCollector, init_metrics_collector, get_metrics_collector

__all__ = [
    "setup_logging",
    "parse_level",
    "LOG_FORMAT",
    "MetricsCollector",
    "init_metrics_collector",
    "get_metrics_collector",
]
