"""
Storage
DESCRIÇÃO: Arquivos de entrada e saída (anotações, CSVs, GHMP, manifest)
"""

from .artifact_store import read_bytes, write_bytes, write_csv, read_csv, dataframe_to_csv_bytes
from .ghmp_codec import read_ghmp, write_ghmp
from .manifest import build_manifest, write_manifest, manifest_path, sha256_hex

__all__ = [
    'read_bytes', 'write_bytes', 'write_csv', 'read_csv', 'dataframe_to_csv_bytes',
    'read_ghmp', 'write_ghmp',
    'build_manifest', 'write_manifest', 'manifest_path', 'sha256_hex',
]
