"""
Contêiner GHMP
DESCRIÇÃO: Serialização binária de um HeatmapStack
FORMATO (little-endian):
    magic  4 bytes  b"GHMP"
    version u32     1
    width   u32
    height  u32
    channels u32
    role    u8      (HeatmapRole)
    dados   float64 por canal, linha a linha
"""

import struct

import numpy as np

from src.domain.entities import HeatmapStack
from src.domain.value_objects import HeatmapRole
from src.utils.exceptions import ParseError

MAGIC = b"GHMP"
VERSION = 1
_HEADER = struct.Struct("<4sIIIIB")


def write_ghmp(stack: HeatmapStack) -> bytes:
    """Serializa o stack no contêiner GHMP"""
    header = _HEADER.pack(MAGIC, VERSION, stack.width, stack.height, stack.channels, int(stack.role))
    return header + np.ascontiguousarray(stack.values, dtype='<f8').tobytes()


def read_ghmp(conteudo: bytes) -> HeatmapStack:
    """
    Lê um contêiner GHMP.

    Raises:
        ParseError: Magic, versão, papel ou tamanho inválidos
    """
    if len(conteudo) < _HEADER.size:
        raise ParseError("contêiner GHMP truncado no cabeçalho")
    magic, versao, width, height, channels, role = _HEADER.unpack_from(conteudo)
    if magic != MAGIC:
        raise ParseError(f"magic inválido {magic!r}, esperado {MAGIC!r}")
    if versao != VERSION:
        raise ParseError(f"versão GHMP não suportada: {versao}")
    try:
        papel = HeatmapRole.from_code(role)
    except ValueError as e:
        raise ParseError(str(e))

    esperado = _HEADER.size + 8 * width * height * channels
    if len(conteudo) != esperado:
        raise ParseError(f"tamanho GHMP {len(conteudo)} bytes, esperado {esperado}")
    valores = np.frombuffer(conteudo, dtype='<f8', offset=_HEADER.size)
    return HeatmapStack(valores.reshape(channels, height, width).astype(np.float64), papel)
