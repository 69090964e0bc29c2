"""Testes de artefatos, manifest, configuração e tratamento de erros"""

import json

import pandas as pd
import pytest

from src.infrastructure.storage import (
    build_manifest,
    dataframe_to_csv_bytes,
    manifest_path,
    read_bytes,
    read_csv,
    sha256_hex,
    write_csv,
    write_manifest,
)
from src.infrastructure.storage.artifact_store import read_comment_lines
from src.utils.config import CONFIG_ENV_VAR, Settings, load_settings
from src.utils.error_handler import EXIT_IO, EXIT_VALIDATION, ErrorHandler
from src.utils.exceptions import DatasetIOError, ParameterError, ParseError
from src.version import __version__


def test_csv_with_comment_header(tmp_path):
    df = pd.DataFrame({'a': [1, 2], 'b': [0.5, float('nan')]})
    caminho = write_csv(tmp_path / "r.csv", df, ["# seed=3", "# mode=x"])
    assert read_comment_lines(caminho) == ["# seed=3", "# mode=x"]
    lido = read_csv(caminho)
    assert list(lido.columns) == ['a', 'b']
    assert dataframe_to_csv_bytes(df).decode('utf-8').splitlines()[2] == "2,nan"


def test_read_missing_file_is_io_error(tmp_path):
    with pytest.raises(DatasetIOError):
        read_bytes(tmp_path / "nada.json")


def test_manifest_location_and_content(tmp_path):
    entrada = tmp_path / "in.json"
    entrada.write_bytes(b"[]\n")
    manifest = build_manifest("eval", [entrada], [tmp_path / "out.csv"], 7, {'LOSS': {'lambda': '1e-05'}})
    destino = write_manifest(tmp_path / "out.csv", False, manifest)
    assert destino == manifest_path(tmp_path / "out.csv", False) == tmp_path / "out.csv.manifest.json"
    dados = json.loads(destino.read_text(encoding='utf-8'))
    assert dados['inputs'][0]['sha256'] == sha256_hex(b"[]\n")
    assert dados['seed'] == 7 and dados['version'] == __version__
    assert manifest_path(tmp_path / "run", True) == tmp_path / "run" / "manifest.json"


def test_settings_defaults():
    padrao = Settings()
    assert padrao.temperature == 0.1 and padrao.lam == 1e-5
    assert padrao.milestones == (170, 200) and padrao.synth_split == (36, 149, 162)


def test_settings_from_file(tmp_path):
    config = tmp_path / "custom.ini"
    config.write_text("[HEATMAP]\ntemperature = 0.05\n[SCHEDULE]\nmilestones = 10,20\n", encoding='utf-8')
    settings = load_settings(str(config))
    assert settings.temperature == 0.05
    assert settings.milestones == (10, 20)
    assert settings.sigma == 2.0
    assert settings.source == str(config)
    assert settings.as_sections()['HEATMAP']['temperature'] == '0.05'


def test_settings_from_env_var(tmp_path, monkeypatch):
    config = tmp_path / "env.ini"
    config.write_text("[LOSS]\nlambda = 0.01\n", encoding='utf-8')
    monkeypatch.setenv(CONFIG_ENV_VAR, str(config))
    assert load_settings().lam == 0.01


def test_settings_errors(tmp_path):
    with pytest.raises(DatasetIOError):
        load_settings(str(tmp_path / "nao_existe.ini"))
    ruim = tmp_path / "ruim.ini"
    ruim.write_text("[TRAIN]\nepochs = muitas\n", encoding='utf-8')
    with pytest.raises(ParameterError):
        load_settings(str(ruim))


def test_exit_codes_and_diagnostic():
    assert ErrorHandler.exit_code_for(DatasetIOError("x.json", "ausente")) == EXIT_IO
    assert ErrorHandler.exit_code_for(OSError("disco")) == EXIT_IO
    assert ErrorHandler.exit_code_for(ParseError("quebrado", linha=3)) == EXIT_VALIDATION
    assert ErrorHandler.diagnostic(ValueError("a\nb")) == "erro: ValueError: a b"
