"""Testes do logging e do coletor de métricas de sessão"""

import logging

from src.infrastructure.logging import MetricsCollector, parse_level, setup_logging


def test_parse_level():
    assert parse_level("debug") == logging.DEBUG
    assert parse_level(" Info ") == logging.INFO
    assert parse_level("barulhento") == logging.WARNING
    assert parse_level("", logging.ERROR) == logging.ERROR


def test_setup_logging_replaces_handlers(tmp_path):
    arquivo = tmp_path / "logs" / "geolandmark.log"
    raiz = setup_logging("ERROR", "DEBUG", str(arquivo))
    raiz = setup_logging("ERROR", "DEBUG", str(arquivo))
    assert len(raiz.handlers) == 2
    logging.getLogger("geolandmark.teste").info("mensagem de arquivo")
    for handler in raiz.handlers:
        handler.flush()
    assert "mensagem de arquivo" in arquivo.read_text(encoding='utf-8')
    setup_logging("WARNING")


def test_collector_counts_and_times():
    coletor = MetricsCollector()
    coletor.start_session()
    coletor.increment("ajustes_degenerados", 3)
    coletor.increment("ajustes_degenerados")
    coletor.increment("ignorado", 0)
    with coletor.time_operation("train"):
        pass
    with coletor.time_operation("train"):
        pass

    assert coletor.counter("ajustes_degenerados") == 4
    assert coletor.counter("ignorado") == 0
    (fase,) = coletor.timings()
    assert fase.fase == "train" and fase.chamadas == 2

    resumo = coletor.end_session()
    assert resumo['contadores'] == {'ajustes_degenerados': 4}
    assert resumo['fases']['train']['chamadas'] == 2
    assert coletor.counter("ajustes_degenerados") == 0


def test_disabled_collector_records_nothing():
    coletor = MetricsCollector(enabled=False)
    coletor.increment("x")
    with coletor.time_operation("fase"):
        pass
    assert coletor.counter("x") == 0
    assert coletor.timings() == []
