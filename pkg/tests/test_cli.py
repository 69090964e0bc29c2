"""Testes de ponta a ponta da CLI"""

import json

import numpy as np
import pandas as pd
import pytest

from src.main import run
from src.services.annotation_service import parse_dataset, write_dataset
from tests.conftest import small_records


def _metricas(caminho):
    tabela = pd.read_csv(caminho, comment='#')
    return dict(zip(tabela['metric'], tabela['value']))


@pytest.fixture
def synth_dir(tmp_path):
    destino = tmp_path / "synth"
    assert run(["synth", "--n", "6", "--split", "2,2,2", "--seed", "3", "--out", str(destino)]) == 0
    return destino


@pytest.fixture
def small_split(tmp_path):
    treino, val = tmp_path / "train.json", tmp_path / "val.json"
    treino.write_bytes(write_dataset(small_records(2)))
    val.write_bytes(write_dataset(small_records(1, prefix="val")))
    return treino, val


def test_version_exits_zero(capsys):
    assert run(["--version"]) == 0
    assert "geolandmark" in capsys.readouterr().out


def test_unknown_flag_is_usage_error():
    assert run(["eval", "--nope"]) == 1


def test_synth_is_deterministic(synth_dir, tmp_path):
    outro = tmp_path / "synth2"
    assert run(["synth", "--n", "6", "--split", "2,2,2", "--seed", "3", "--out", str(outro)]) == 0
    for nome in ("train.json", "val.json", "test.json"):
        assert (synth_dir / nome).read_bytes() == (outro / nome).read_bytes()
    manifest = json.loads((synth_dir / "manifest.json").read_text(encoding='utf-8'))
    assert manifest['command'] == "synth" and manifest['seed'] == 3


def test_eval_identical_files(synth_dir, tmp_path):
    out = tmp_path / "metrics.csv"
    val = str(synth_dir / "val.json")
    assert run(["eval", "--pred", val, "--gt", val, "--out", str(out)]) == 0
    metricas = _metricas(out)
    assert metricas['sdr_average'] == 100.0
    assert metricas['mre_mm'] == 0.0
    assert (tmp_path / "metrics_per_landmark.csv").exists()
    assert (tmp_path / "metrics.csv.manifest.json").exists()


def test_eval_missing_file_is_io_error(synth_dir, tmp_path, capsys):
    codigo = run(["eval", "--pred", str(tmp_path / "nada.json"), "--gt", str(synth_dir / "val.json"),
                  "--out", str(tmp_path / "m.csv")])
    assert codigo == 2
    assert capsys.readouterr().err.strip().splitlines()[-1].startswith("erro: DatasetIOError")


def test_eval_malformed_file_is_validation_error(synth_dir, tmp_path):
    ruim = tmp_path / "ruim.json"
    ruim.write_text("[{", encoding='utf-8')
    assert run(["eval", "--pred", str(ruim), "--gt", str(synth_dir / "val.json"),
                "--out", str(tmp_path / "m.csv")]) == 1


def test_encode_decode_argmax_round_trip(synth_dir, tmp_path):
    heatmaps, preds = tmp_path / "hm", tmp_path / "pred.json"
    test_json = str(synth_dir / "test.json")
    assert run(["encode", "--annotations", test_json, "--width", "64", "--height", "64",
                "--out", str(heatmaps)]) == 0
    assert sorted(p.name for p in heatmaps.glob("*.ghmp")) == ["synth_0004.ghmp", "synth_0005.ghmp"]
    assert run(["decode", "--heatmaps", str(heatmaps), "--mode", "argmax", "--reference", test_json,
                "--out", str(preds)]) == 0

    gts = {r.image_id: r for r in parse_dataset((synth_dir / "test.json").read_bytes())}
    for pred in parse_dataset(preds.read_bytes(), check_bounds=False):
        erro = np.abs(pred.landmarks.coords - gts[pred.image_id].landmarks.coords)
        assert np.all(erro <= 0.5 * 957 / 64 + 1e-9)


def test_encode_single_file_needs_one_record(synth_dir, tmp_path):
    assert run(["encode", "--annotations", str(synth_dir / "train.json"),
                "--out", str(tmp_path / "a.ghmp")]) == 1
    assert run(["encode", "--annotations", str(synth_dir / "train.json"), "--image-id", "synth_0000",
                "--out", str(tmp_path / "a.ghmp")]) == 0


def test_train_then_report(small_split, tmp_path):
    treino, val = small_split
    run_dir = tmp_path / "run1"
    assert run(["train", "--train", str(treino), "--val", str(val), "--epochs", "3", "--width", "32",
                "--height", "32", "--warmup-steps", "0", "--lr", "0.05", "--milestones", "2",
                "--lambda", "0.001", "--out", str(run_dir)]) == 0
    for nome in ("train_report.csv", "loss_geo_curve.csv", "predictions_val.json", "manifest.json"):
        assert (run_dir / nome).exists()
    assert len(pd.read_csv(run_dir / "train_report.csv", comment='#')) == 3

    out = tmp_path / "report.csv"
    assert run(["report", "--runs", str(run_dir), "--out", str(out)]) == 0
    linhas = out.read_text(encoding='utf-8').splitlines()
    assert linhas[0].startswith("# reference:") and linhas[1].startswith("# reference:")
    tabela = pd.read_csv(out, comment='#')
    assert tabela['run'].tolist() == ["run1"]
    assert tabela['lambda'].tolist() == [0.001]
    assert tabela['epoch'].tolist() == [2]


def test_report_without_runs_dir_is_io_error(tmp_path):
    assert run(["report", "--runs", str(tmp_path / "vazio"), "--out", str(tmp_path / "r.csv")]) == 2


def test_gradcheck_report(tmp_path):
    out = tmp_path / "grad.csv"
    assert run(["gradcheck", "--instances", "1", "--lambda", "0", "--out", str(out)]) == 0
    tabela = pd.read_csv(out)
    estados = dict(zip(tabela['component'], tabela['status']))
    assert estados['geo_chain'] == "not exercised"
    assert estados['mse_heatmap_grad'] == "ok"


def test_gradcheck_to_stdout(capsys):
    assert run(["gradcheck", "--instances", "1"]) == 0
    saida = capsys.readouterr().out.splitlines()
    assert saida[0] == "component,max_rel_err,status"
    assert len(saida) == 6


@pytest.mark.slow
def test_gradcheck_full_run(tmp_path):
    assert run(["gradcheck", "--seed", "1", "--out", str(tmp_path / "grad.csv")]) == 0
