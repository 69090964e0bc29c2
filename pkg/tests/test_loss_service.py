"""Testes da MSE de heatmaps e da perda total com gradiente unificado"""

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from src.services.geometry_service import geometric_loss
from src.services.heatmap_service import gaussian_heatmaps, soft_argmax_stack
from src.services.loss_service import (
    compute_total_loss,
    geo_loss_on_logits,
    mse_heatmap,
    mse_heatmap_grad,
    total_loss,
)
from src.services.training.gradcheck import (
    central_difference,
    peaked_logits,
    relative_error,
    tilted_configuration,
)
from src.utils.exceptions import DimensionError, ParameterError


def _instancia(seed=0):
    rng = np.random.Generator(np.random.Philox(seed))
    centros = tilted_configuration(rng, 32, 32)
    logits = peaked_logits(rng, centros, 32, 32, 0.1)
    return rng, logits, centros + rng.normal(0.0, 0.5, size=centros.shape)


# ============================================
# MSE
# ============================================

def test_mse_identity_and_offset():
    alvo = np.random.default_rng(0).uniform(size=(2, 3, 4))
    assert mse_heatmap(alvo, alvo) == 0.0
    assert mse_heatmap(alvo + 1.0, alvo) == pytest.approx(1.0)


def test_mse_hand_example():
    pred = np.array([[[0.0, 1.0]]])
    alvo = np.array([[[1.0, 1.0]]])
    assert mse_heatmap(pred, alvo) == 0.5
    assert_array_equal(mse_heatmap_grad(pred, alvo), [[[-1.0, 0.0]]])


def test_mse_shape_mismatch():
    with pytest.raises(DimensionError):
        mse_heatmap(np.zeros((1, 2, 2)), np.zeros((1, 2, 3)))
    with pytest.raises(DimensionError):
        mse_heatmap_grad(np.zeros((1, 2, 2)), np.zeros((2, 2, 2)))


def test_mse_gradient_matches_central_differences():
    rng = np.random.default_rng(5)
    pred = rng.normal(size=(16, 32, 32))
    alvo = rng.uniform(size=(16, 32, 32))
    analitico = mse_heatmap_grad(pred, alvo)
    indices = [tuple(int(v) for v in rng.integers(0, (16, 32, 32))) for _ in range(64)]
    a = [analitico[i] for i in indices]
    n = [central_difference(lambda x: mse_heatmap(x, alvo), pred, i, 1e-5) for i in indices]
    assert relative_error(a, n) <= 1e-6


# ============================================
# PERDA TOTAL
# ============================================

def test_lambda_zero_is_plain_mse(schema):
    _, logits, alvo = _instancia(1)
    breakdown, grad = total_loss(logits, alvo, schema, 0.1, 2.0, 0.0)
    target = gaussian_heatmaps(alvo, 32, 32, 2.0)
    assert breakdown.total == breakdown.mse == mse_heatmap(logits, target)
    assert_array_equal(grad, mse_heatmap_grad(logits, target))


def test_geo_term_uses_decoded_coordinates(schema):
    _, logits, alvo = _instancia(2)
    breakdown, _ = total_loss(logits, alvo, schema, 0.1, 2.0, 1e-3)
    esperado = geometric_loss(soft_argmax_stack(logits, 0.1), schema).total
    assert breakdown.geo == pytest.approx(esperado, rel=1e-12)
    assert breakdown.total == pytest.approx(breakdown.mse + 1e-3 * breakdown.geo, rel=1e-12)
    assert not breakdown.degenerate


def test_uniform_logits_fall_back_to_mse(schema):
    _, _, alvo = _instancia(3)
    logits = np.zeros((16, 32, 32))
    breakdown, grad = total_loss(logits, alvo, schema, 0.1, 2.0, 1e-2)
    assert breakdown.degenerate
    assert breakdown.geo == 0.0
    assert_array_equal(grad, mse_heatmap_grad(logits, gaussian_heatmaps(alvo, 32, 32, 2.0)))


def test_negative_lambda_rejected(schema):
    _, logits, alvo = _instancia(4)
    with pytest.raises(ParameterError):
        total_loss(logits, alvo, schema, 0.1, 2.0, -1.0)


def test_geo_chain_gradient_only_on_constrained_channels(schema):
    _, logits, _ = _instancia(5)
    _, grad, coords = geo_loss_on_logits(logits, schema, 0.1)
    assert coords.shape == (16, 2)
    livres = set(range(16)) - {int(l) for l in schema.constrained_ids()}
    for canal in livres:
        assert not np.any(grad[canal])


def test_total_gradient_matches_central_differences_on_three_channels(schema):
    rng, logits, alvo = _instancia(6)
    target = gaussian_heatmaps(alvo, 32, 32, 2.0)

    def perda(x):
        return compute_total_loss(x, alvo, schema, 0.1, 2.0, 1e-5, target_values=target)[0].total

    _, analitico = compute_total_loss(logits, alvo, schema, 0.1, 2.0, 1e-5, target_values=target)
    a, n = [], []
    for canal in rng.choice(16, size=3, replace=False):
        for i in range(32):
            for j in range(32):
                indice = (int(canal), i, j)
                a.append(analitico[indice])
                n.append(central_difference(perda, logits, indice, 1e-5))
    assert relative_error(a, n) <= 1e-4
