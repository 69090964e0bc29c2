"""
Manifest de artefatos
DESCRIÇÃO: Registro JSON de como um conjunto de artefatos foi gerado
REGRAS DE NEGÓCIO:
    - Lista comando, entradas (com sha256), semente, versão, configuração e saídas
    - Chaves ordenadas e nenhum horário: reexecuções geram bytes idênticos
    - Saída em diretório -> <dir>/manifest.json; saída em arquivo -> <arquivo>.manifest.json
"""

import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

from src.version import __version__
from .artifact_store import PathLike, read_bytes, write_bytes

logger = logging.getLogger(__name__)


def sha256_hex(conteudo: bytes) -> str:
    return hashlib.sha256(conteudo).hexdigest()


def manifest_path(out: PathLike, is_dir: bool) -> Path:
    destino = Path(out)
    if is_dir:
        return destino / "manifest.json"
    return destino.with_name(destino.name + ".manifest.json")


def build_manifest(command: str, inputs: Sequence[PathLike], outputs: Sequence[PathLike],
                   seed: Optional[int], config: Dict[str, Any],
                   arguments: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Monta o dicionário do manifest"""
    entradas: List[Dict[str, str]] = [
        {'path': Path(p).as_posix(), 'sha256': sha256_hex(read_bytes(p))} for p in inputs
    ]
    return {
        'command': command,
        'arguments': arguments or {},
        'inputs': entradas,
        'outputs': [Path(p).as_posix() for p in outputs],
        'seed': seed,
        'version': __version__,
        'config': config,
    }


def write_manifest(out: PathLike, is_dir: bool, manifest: Dict[str, Any]) -> Path:
    """Grava o manifest ao lado dos artefatos"""
    texto = json.dumps(manifest, indent=2, sort_keys=True, ensure_ascii=False)
    destino = write_bytes(manifest_path(out, is_dir), (texto + "\n").encode('utf-8'))
    logger.info(f"Manifest gravado em {destino}")
    return destino
