"""
Service de relatórios
DESCRIÇÃO: Consolida diretórios de execuções de treino num único CSV
REGRAS DE NEGÓCIO:
    - Cada diretório precisa de train_report.csv (gerado por `train`)
    - Uma linha por execução, com a última época e o eco da configuração
    - Linhas '# reference:' citam a tabela comparativa e a redução de parâmetros
"""

import logging
from pathlib import Path
from typing import Dict, List, Sequence

import pandas as pd

from src.application.dtos.report_dtos import REFERENCE_PARAM_REDUCTION, REFERENCE_TABLE_ROW, TRAIN_COLUMNS
from src.infrastructure.storage.artifact_store import PathLike, read_comment_lines, read_csv
from src.utils.exceptions import DatasetIOError, ValidationError

logger = logging.getLogger(__name__)

TRAIN_REPORT_NAME = "train_report.csv"
CONFIG_COLUMNS = ['mode', 'lambda', 'loss_mode', 'temperature', 'epochs', 'seed']
PARAM_COLUMNS = ['trainable_params', 'total_params']
MERGED_COLUMNS = ['run'] + CONFIG_COLUMNS + PARAM_COLUMNS + TRAIN_COLUMNS


def reference_lines() -> List[str]:
    return [
        f"# reference: SDR 0.5/1/2 mm / SDR_average / MRE mm = {REFERENCE_TABLE_ROW}",
        f"# reference: {REFERENCE_PARAM_REDUCTION}",
    ]


def _header_values(linhas: Sequence[str]) -> Dict[str, str]:
    valores: Dict[str, str] = {}
    for linha in linhas:
        corpo = linha.lstrip('#').strip()
        if '=' in corpo:
            chave, valor = corpo.split('=', 1)
            valores[chave.strip()] = valor.strip()
    return valores


def load_run(run_dir: PathLike) -> Dict[str, object]:
    """
    Resume uma execução: configuração ecoada e última época.

    Raises:
        DatasetIOError: Se train_report.csv não existir ou não puder ser lido
        ValidationError: Se o relatório não tiver épocas
    """
    caminho = Path(run_dir) / TRAIN_REPORT_NAME
    if not caminho.is_file():
        raise DatasetIOError(str(caminho), "train_report.csv ausente")
    cabecalho = _header_values(read_comment_lines(caminho))
    tabela = read_csv(caminho)
    if tabela.empty:
        raise ValidationError(f"Relatório sem épocas: {caminho}", details={'caminho': str(caminho)})

    linha: Dict[str, object] = {'run': Path(run_dir).name}
    for coluna in CONFIG_COLUMNS + PARAM_COLUMNS:
        linha[coluna] = cabecalho.get(coluna, '')
    ultima = tabela.iloc[-1]
    for coluna in TRAIN_COLUMNS:
        linha[coluna] = ultima[coluna]
    return linha


def merge_runs(run_dirs: Sequence[PathLike]) -> pd.DataFrame:
    """
    Junta as execuções na ordem informada.

    Raises:
        ValidationError: Se nenhuma execução for informada
    """
    if not run_dirs:
        raise ValidationError("Nenhum diretório de execução informado")
    linhas = [load_run(d) for d in run_dirs]
    logger.info(f"Relatório consolidado: {len(linhas)} execuções")
    return pd.DataFrame(linhas, columns=MERGED_COLUMNS)
