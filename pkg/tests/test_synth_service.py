"""Testes do gerador sintético"""

import math

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from src.domain.value_objects import LossMode
from src.services.annotation_service import line_groups_default, parse_dataset_container, validate_landmark_set
from src.services.geometry_service import fit_direction, geometric_loss, geometric_loss_grad
from src.services.synth_service import (
    SynthOptions,
    SynthRanges,
    ToothConfigParams,
    build_dataset,
    default_half_widths,
    generate_dataset,
    generate_tooth_config,
    level_anchors,
    perturb,
    sample_params,
    split_counts,
    synth_record,
)
from src.utils.exceptions import ParameterError


def _params(**kw):
    base = dict(axis_angle=-math.pi / 2, root_length=120.0, crown_offset=60.0, apex=(100.0, 400.0),
                half_widths=default_half_widths())
    base.update(kw)
    return ToothConfigParams(**base)


def test_vertical_axis_gives_horizontal_levels():
    landmarks = generate_tooth_config(_params())
    for membros in line_groups_default().level_lines:
        assert_allclose(fit_direction(landmarks.points(membros)).vector, (1.0, 0.0), atol=1e-12)


def test_level_anchors_for_upward_axis():
    ancoras = level_anchors(_params())
    assert_allclose(ancoras["root_apex_level"], (100.0, 400.0))
    assert_allclose(ancoras["apical_third_level"], (100.0, 360.0), atol=1e-9)
    assert_allclose(ancoras["mid_root_level"], (100.0, 340.0), atol=1e-9)


def test_invalid_params_rejected():
    with pytest.raises(ParameterError):
        _params(root_length=0.0)
    with pytest.raises(ParameterError):
        _params(crest_fraction=1.5)


def test_perturb_zero_noise_is_identity():
    landmarks = generate_tooth_config(_params())
    assert perturb(landmarks, 0.0, 1) is landmarks


def test_perturb_is_deterministic():
    landmarks = generate_tooth_config(_params())
    assert_array_equal(perturb(landmarks, 1.0, 42).coords, perturb(landmarks, 1.0, 42).coords)


def test_perturb_noise_statistics():
    landmarks = generate_tooth_config(_params())
    ruido = np.stack([perturb(landmarks, 2.0, seed).coords - landmarks.coords for seed in range(1000)])
    desvios = ruido.reshape(1000, -1).std(axis=0)
    assert np.all((desvios >= 1.8) & (desvios <= 2.2))


def test_default_split_counts():
    divisoes = build_dataset(SynthOptions(n_images=347))
    assert [len(divisoes[n]) for n in ("train", "val", "test")] == [36, 149, 162]


def test_split_must_sum_to_n():
    with pytest.raises(ParameterError):
        SynthOptions(n_images=10, split=(1, 1, 1))
    with pytest.raises(ParameterError):
        split_counts([1, 2])


def test_records_inside_image_and_exact_without_noise():
    options = SynthOptions(n_images=3, split=(1, 1, 1))
    record = synth_record(options, 2)
    assert record.image_id == "synth_0002"
    assert np.all(record.landmarks.coords >= 0)
    assert np.all(record.landmarks.coords[:, 0] < 957) and np.all(record.landmarks.coords[:, 1] < 555)


def test_parallel_generation_matches_sequential():
    options = SynthOptions(n_images=9, split=(3, 3, 3), seed=5, noise_sigma=1.0)
    assert build_dataset(options, threads=1) == build_dataset(options, threads=3)


def test_generate_dataset_files(tmp_path):
    options = SynthOptions(n_images=3, split=(1, 1, 1), seed=7)
    caminhos = generate_dataset(tmp_path / "a", options)
    generate_dataset(tmp_path / "b", options)
    for nome, caminho in caminhos.items():
        records, meta = parse_dataset_container(caminho.read_bytes())
        assert len(records) == 1
        assert meta['split'] == nome and meta['seed'] == 7
        assert caminho.read_bytes() == (tmp_path / "b" / f"{nome}.json").read_bytes()


# ============================================
# ORÁCULO DE EXATIDÃO E DEGRADAÇÃO COM RUÍDO
# ============================================

@pytest.mark.slow
def test_sampled_configurations_are_exact():
    rng = np.random.Generator(np.random.Philox(2024))
    absoluto = line_groups_default(LossMode.ABSOLUTE)
    quadrado = line_groups_default(LossMode.SQUARED)
    for _ in range(1000):
        landmarks = generate_tooth_config(sample_params(rng, SynthRanges()))
        assert geometric_loss(landmarks, absoluto).total <= 1e-12
        assert np.linalg.norm(geometric_loss_grad(landmarks, quadrado)) <= 1e-9


def test_residual_grows_with_noise():
    rng = np.random.Generator(np.random.Philox(77))
    exatas = [generate_tooth_config(sample_params(rng, SynthRanges())) for _ in range(200)]
    schema = line_groups_default(LossMode.ABSOLUTE)
    medias = []
    for sigma in (0.0, 0.5, 1.0, 2.0, 4.0):
        # mesma semente por configuração: só a escala do ruído muda entre níveis
        residuos = [geometric_loss(perturb(exata, sigma, np.random.SeedSequence([77, i])), schema).total
                    for i, exata in enumerate(exatas)]
        medias.append(np.mean(residuos))
    assert medias[0] <= 1e-12
    assert all(a < b for a, b in zip(medias, medias[1:]))


def test_generated_annotations_pass_validation():
    options = SynthOptions(n_images=30, split=(10, 10, 10), seed=3, noise_sigma=2.0)
    for records in build_dataset(options).values():
        for record in records:
            assert validate_landmark_set(record.landmarks, record.width, record.height).is_valid
