"""Testes da codificação gaussiana e dos decodificadores argmax / soft-argmax"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.domain.value_objects import HeatmapRole, LandmarkId
from src.infrastructure.storage import read_ghmp, write_ghmp
from src.services.heatmap_service import (
    LatticeTransform,
    decode_argmax,
    encode_gaussian,
    gaussian_heatmaps,
    soft_argmax,
    soft_argmax_jacobian,
    softmax_probabilities,
)
from src.services.training.gradcheck import central_difference
from src.utils.exceptions import NonFiniteInputError, ParameterError, ParseError


def _coords(x, y):
    coords = np.zeros((16, 2))
    coords[:] = (x, y)
    return coords


# ============================================
# CODIFICAÇÃO
# ============================================

def test_gaussian_peak_and_distance():
    valores = gaussian_heatmaps(_coords(5.0, 4.0), 16, 12, 2.0)
    assert valores.shape == (16, 12, 16)
    assert valores[0, 4, 5] == 1.0
    assert valores[0, 4, 7] == pytest.approx(math.exp(-0.5), abs=1e-12)


def test_gaussian_far_outside_is_monotone():
    valores = gaussian_heatmaps(_coords(-50.0, 3.0), 8, 8, 2.0)[0]
    linha = valores[3]
    assert np.all(np.diff(linha) < 0)
    assert np.all(valores <= math.exp(-50.0 ** 2 / 8.0))


def test_encode_rejects_non_positive_sigma():
    with pytest.raises(ParameterError):
        encode_gaussian(_coords(1.0, 1.0), 8, 8, 0.0)


def test_encode_role_is_target():
    assert encode_gaussian(_coords(1.0, 1.0), 8, 8, 1.0).role is HeatmapRole.TARGET


def test_ghmp_preserves_values():
    stack = encode_gaussian(_coords(3.3, 2.7), 9, 7, 1.5)
    lido = read_ghmp(write_ghmp(stack))
    assert lido.role is HeatmapRole.TARGET
    assert_array_equal(lido.values, stack.values)


def test_ghmp_rejects_bad_magic():
    conteudo = bytearray(write_ghmp(encode_gaussian(_coords(1.0, 1.0), 4, 4, 1.0)))
    conteudo[:4] = b"XXXX"
    with pytest.raises(ParseError):
        read_ghmp(bytes(conteudo))


# ============================================
# ARGMAX
# ============================================

def test_argmax_recovers_rounded_coordinate():
    coords = np.array([[3.2 + k * 0.5, 5.7] for k in range(16)])
    decoded = decode_argmax(encode_gaussian(coords, 24, 12, 2.0))
    assert_array_equal(decoded.coords, np.round(coords))


def test_argmax_constant_channel_tie_break():
    assert decode_argmax(np.ones((16, 5, 5)))[LandmarkId.CP] == (0.0, 0.0)


def test_argmax_lowest_row_wins():
    valores = np.zeros((16, 5, 5))
    valores[:, 1, 3] = 1.0
    valores[:, 3, 1] = 1.0
    assert decode_argmax(valores)[LandmarkId.AP] == (3.0, 1.0)


# ============================================
# SOFTMAX E SOFT-ARGMAX
# ============================================

def test_softmax_symmetric_pair():
    assert_allclose(softmax_probabilities(np.array([[0.0, 0.0]]), 0.7).values, [[0.5, 0.5]])


def test_softmax_with_temperature():
    probs = softmax_probabilities(np.array([[0.0, 0.1]]), 0.1).values
    assert_allclose(probs, [[1 / (1 + math.e), math.e / (1 + math.e)]], atol=1e-12)
    assert_allclose(probs, [[0.268941, 0.731059]], atol=1e-6)


def test_softmax_shift_invariant():
    h = np.random.default_rng(0).normal(size=(6, 7))
    assert_allclose(softmax_probabilities(h + 1000.0, 0.5).values,
                    softmax_probabilities(h, 0.5).values, atol=1e-12)


def test_softmax_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        softmax_probabilities(np.zeros((2, 2)), 0.0)
    with pytest.raises(NonFiniteInputError):
        softmax_probabilities(np.array([[0.0, math.inf]]), 0.1)


def test_soft_argmax_uniform_is_centroid():
    assert soft_argmax(np.zeros((5, 8)), 0.3) == pytest.approx((3.5, 2.0))


def test_soft_argmax_pair():
    x, y = soft_argmax(np.array([[0.0, 0.1]]), 0.1)
    assert x == pytest.approx(0.731059, abs=1e-6)
    assert y == 0.0


def test_soft_argmax_converges_to_argmax():
    rng = np.random.default_rng(3)
    h = rng.uniform(0.0, 1.0, size=(9, 11))
    h[6, 2] = 3.0
    alvo = np.array([2.0, 6.0])
    distancias = [np.linalg.norm(np.array(soft_argmax(h, t)) - alvo) for t in (1.0, 0.5, 0.1, 0.01)]
    assert all(a > b for a, b in zip(distancias, distancias[1:]))
    assert distancias[-1] < 1e-6


def test_jacobian_pair_closed_form():
    jac = soft_argmax_jacobian(np.array([[0.0, 0.1]]), 0.1)
    m = math.e / (1 + math.e)
    assert jac[0, 0, 1] == pytest.approx(m * (1 - m) / 0.1, abs=1e-12)
    assert jac[0, 0, 1] == pytest.approx(1.96612, abs=1e-5)
    assert_array_equal(jac[1], np.zeros((1, 2)))


def test_jacobian_matches_central_differences():
    h = np.random.default_rng(11).normal(0.0, 0.1, size=(6, 7))
    jac = soft_argmax_jacobian(h, 0.1)
    for i in range(6):
        for j in range(7):
            for c in (0, 1):
                numerico = central_difference(lambda x: soft_argmax(x, 0.1)[c], h, (i, j), 1e-5)
                assert jac[c, i, j] == pytest.approx(numerico, abs=1e-7)


# ============================================
# GRADE
# ============================================

def test_lattice_transform_is_isotropic_and_invertible():
    transform = LatticeTransform.fit(957, 555, 64, 64)
    assert transform.scale == pytest.approx(64 / 957)
    pontos = np.array([[0.0, 0.0], [956.0, 554.0], [400.5, 300.25]])
    assert_allclose(transform.to_image(transform.to_lattice(pontos)), pontos, atol=1e-9)
    centro = transform.to_lattice(np.array([[478.0, 277.0]]))
    assert_allclose(centro, [[31.5, 31.5]], atol=1e-9)


# ============================================
# PROPRIEDADES EM LOGITS SORTEADOS
# ============================================

def _tamanhos(rng, n):
    """Grades sorteadas até 128x128, incluindo os extremos"""
    tamanhos = [(1, 2), (128, 128)]
    tamanhos += [tuple(int(v) for v in rng.integers(1, 129, size=2)) for _ in range(n - 2)]
    return tamanhos


def test_softmax_normalized_on_random_logits():
    rng = np.random.default_rng(128)
    for altura, largura in _tamanhos(rng, 40):
        h = rng.uniform(-10.0, 10.0, size=(altura, largura))
        for t in (0.1, 0.5, 1.0, 2.0):
            probs = softmax_probabilities(h, t).values
            assert abs(probs.sum() - 1.0) <= 1e-12
            assert np.all((probs >= 0.0) & (probs <= 1.0))


def test_soft_argmax_shift_invariant_and_bounded():
    rng = np.random.default_rng(129)
    for altura, largura in _tamanhos(rng, 40):
        h = rng.uniform(-10.0, 10.0, size=(altura, largura))
        t = float(rng.choice([0.1, 0.5, 1.0]))
        x, y = soft_argmax(h, t)
        assert 0.0 <= x <= largura - 1 and 0.0 <= y <= altura - 1
        assert_allclose(soft_argmax(h + rng.uniform(-50.0, 50.0), t), (x, y), atol=1e-10)
