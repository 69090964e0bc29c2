"""Fixtures compartilhadas pelos testes"""

import math

import numpy as np
import pytest

from src.domain.entities import AnnotationRecord, LandmarkSet
from src.services.annotation_service import line_groups_default
from src.services.synth_service import (
    ToothConfigParams,
    default_half_widths,
    generate_tooth_config,
    perturb,
)


def make_record(image_id, coords, width=957, height=555, spacing=0.1, unchecked=False):
    """Registro de anotação a partir de um array (16, 2)"""
    return AnnotationRecord(
        image_id=image_id,
        width=width,
        height=height,
        spacing_mm_per_px=spacing,
        landmarks=LandmarkSet(np.asarray(coords, dtype=np.float64), unchecked=unchecked),
    )


def small_params(axis_angle=-math.pi / 2, apex=(12.0, 26.0)):
    """Configuração que cabe numa imagem 32x32"""
    return ToothConfigParams(
        axis_angle=axis_angle,
        root_length=16.0,
        crown_offset=5.0,
        apex=apex,
        half_widths=default_half_widths(apex_bone=3.0, root_13=2.0, bone_13=2.0, root_12=2.5, bone_12=2.0),
        cej_half_width=3.0,
        crest_half_width=4.0,
    )


def small_records(n, noise_sigma=0.0, seed=0, prefix="img"):
    """n registros 32x32 com eixos levemente inclinados e ruído opcional"""
    records = []
    for i in range(n):
        params = small_params(axis_angle=-math.pi / 2 + 0.08 * (i - n / 2), apex=(12.0 + i % 3, 26.0))
        landmarks = perturb(generate_tooth_config(params), noise_sigma, np.random.SeedSequence([seed, i]))
        records.append(make_record(f"{prefix}_{i:02d}", landmarks.coords, width=32, height=32, spacing=0.1))
    return records


@pytest.fixture
def schema():
    return line_groups_default()


@pytest.fixture
def exact_params():
    return ToothConfigParams(
        axis_angle=-math.pi / 2 + 0.2,
        root_length=150.0,
        crown_offset=80.0,
        apex=(470.0, 420.0),
        half_widths=default_half_widths(),
    )


@pytest.fixture
def exact_landmarks(exact_params):
    return generate_tooth_config(exact_params)


@pytest.fixture
def exact_record(exact_landmarks):
    return make_record("exact_0001", exact_landmarks.coords)
