# src/infrastructure/logging/metrics_collector.py
"""
Coletor de métricas de sessão
DESCRIÇÃO: Tempos por fase de comando e contadores de eventos do domínio
    (ajustes degenerados, registros processados)
REGRAS DE NEGÓCIO:
    - O resumo vai só para o log; artefatos nunca carregam tempos
    - Seguro entre threads (trabalho por imagem pode rodar em paralelo)
"""

import logging
import time
from collections import defaultdict
from contextlib import contextmanager
from dataclasses import dataclass
from threading import Lock
from typing import Any, DefaultDict, Dict, Iterator, List, Optional

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class PhaseTiming:
    """Estatísticas de tempo de uma fase"""
    fase: str
    chamadas: int
    total_ms: float
    max_ms: float

    @classmethod
    def from_samples(cls, fase: str, amostras: List[float]) -> 'PhaseTiming':
        return cls(fase, len(amostras), round(sum(amostras), 2), round(max(amostras), 2))


class MetricsCollector:
    """Contadores e tempos da execução corrente."""

    def __init__(self, enabled: bool = True):
        self.enabled = enabled
        self._inicio: Optional[float] = None
        self._contadores: DefaultDict[str, int] = defaultdict(int)
        self._tempos: DefaultDict[str, List[float]] = defaultdict(list)
        self._lock = Lock()

    def start_session(self):
        with self._lock:
            self._inicio = time.perf_counter()
            self._contadores.clear()
            self._tempos.clear()

    def increment(self, evento: str, quantidade: int = 1):
        """Soma ao contador do evento (ex.: 'ajustes_degenerados')"""
        if not self.enabled or quantidade == 0:
            return
        with self._lock:
            self._contadores[evento] += quantidade

    def counter(self, evento: str) -> int:
        with self._lock:
            return self._contadores.get(evento, 0)

    @contextmanager
    def time_operation(self, fase: str) -> Iterator[None]:
        """Mede o tempo de parede de uma fase do comando"""
        inicio = time.perf_counter()
        try:
            yield
        finally:
            if self.enabled:
                with self._lock:
                    self._tempos[fase].append((time.perf_counter() - inicio) * 1000.0)

    def timings(self) -> List[PhaseTiming]:
        with self._lock:
            return [PhaseTiming.from_samples(f, a) for f, a in sorted(self._tempos.items()) if a]

    def summary(self) -> Dict[str, Any]:
        duracao = None if self._inicio is None else round(time.perf_counter() - self._inicio, 3)
        with self._lock:
            contadores = dict(sorted(self._contadores.items()))
        return {
            'duracao_segundos': duracao,
            'contadores': contadores,
            'fases': {t.fase: {'chamadas': t.chamadas, 'total_ms': t.total_ms, 'max_ms': t.max_ms}
                      for t in self.timings()},
        }

    def end_session(self) -> Dict[str, Any]:
        """Encerra a sessão e registra o resumo no log"""
        resumo = self.summary()
        if self.enabled and self._inicio is not None:
            logger.info(f"Resumo da sessão: {resumo}")
        self.start_session()
        self._inicio = None
        return resumo


_metrics_collector: Optional[MetricsCollector] = None


def get_metrics_collector() -> Optional[MetricsCollector]:
    return _metrics_collector


def init_metrics_collector(enabled: bool = True) -> MetricsCollector:
    global _metrics_collector
    _metrics_collector = MetricsCollector(enabled)
    return _metrics_collector
