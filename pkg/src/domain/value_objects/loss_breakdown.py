"""
Value Object: LossBreakdown
DESCRIÇÃO: Decomposição da perda total = mse + lambda·geo
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class LossBreakdown:
    """Componentes da perda de uma amostra ou de um lote"""

    mse: float
    geo: float
    lam: float
    total: float
    degenerate: bool = False

    @classmethod
    def combine(cls, mse: float, geo: float, lam: float, degenerate: bool = False) -> 'LossBreakdown':
        return cls(mse=mse, geo=geo, lam=lam, total=mse + lam * geo, degenerate=degenerate)
