"""Testes do esquema de landmarks e do formato de anotações"""

import json
import math

import numpy as np
import pytest

from src.domain.entities import LandmarkSet
from src.domain.value_objects import LandmarkId, LossMode, N_LANDMARKS
from src.services.annotation_service import (
    FailureKind,
    line_groups_default,
    parse_dataset,
    parse_dataset_container,
    validate_landmark_set,
    write_dataset,
)
from src.utils.exceptions import DimensionError, NonFiniteInputError, ParameterError, ParseError, SchemaError, ValidationError
from tests.conftest import make_record


def _raw(record):
    return json.loads(write_dataset([record]).decode('utf-8'))


def test_vocabulary_has_sixteen_distinct_ids():
    assert N_LANDMARKS == 16
    assert sorted(int(l) for l in LandmarkId) == list(range(16))
    assert LandmarkId.from_string("AB_13") is LandmarkId.AB_13
    with pytest.raises(ValueError):
        LandmarkId.from_string("XX")


def test_landmark_set_rejects_wrong_shape():
    with pytest.raises(DimensionError):
        LandmarkSet(np.zeros((15, 2)))


def test_default_schema_groups():
    schema = line_groups_default()
    assert schema.axis == (LandmarkId.CP, LandmarkId.AP)
    apex, third, mid = schema.level_lines
    assert len(apex) == 3 and LandmarkId.AP in apex
    assert len(third) == 4 and len(mid) == 4
    livres = {LandmarkId.CEJ_A, LandmarkId.CEJ_P, LandmarkId.A_crest, LandmarkId.P_crest}
    assert livres.isdisjoint(schema.constrained_ids())
    assert schema.loss_mode is LossMode.PAPER_LITERAL


def test_parse_round_trip_single_record(exact_record):
    records = parse_dataset(write_dataset([exact_record]))
    assert len(records) == 1
    assert records[0] == exact_record


def test_container_keeps_meta(exact_record):
    records, meta = parse_dataset_container(write_dataset([exact_record], meta={'seed': 3}))
    assert meta == {'seed': 3}
    assert records[0].image_id == exact_record.image_id


def test_missing_landmark_names_it(exact_record):
    raw = _raw(exact_record)
    del raw[0]['landmarks']['PB_12']
    with pytest.raises(SchemaError) as exc:
        parse_dataset(json.dumps(raw).encode('utf-8'))
    assert exc.value.landmark == "PB_12"


def test_zero_spacing_is_validation_error(exact_record):
    raw = _raw(exact_record)
    raw[0]['spacing_mm_per_px'] = 0
    with pytest.raises(ValidationError):
        parse_dataset(json.dumps(raw).encode('utf-8'))


def test_malformed_json_reports_line():
    with pytest.raises(ParseError) as exc:
        parse_dataset(b'[\n  {"image_id": \n')
    assert exc.value.linha is not None


def test_annotation_out_of_bounds_rejected_prediction_accepted(exact_record):
    coords = exact_record.landmarks.as_array()
    coords[LandmarkId.CEJ_A] = (-1.0, 0.0)
    conteudo = write_dataset([make_record("fora", coords)])
    with pytest.raises(ValidationError):
        parse_dataset(conteudo)
    preds = parse_dataset(conteudo, check_bounds=False)
    assert preds[0].landmarks.unchecked


def test_validate_inside_image_is_empty(exact_landmarks):
    verdict = validate_landmark_set(exact_landmarks, 957, 555)
    assert verdict.is_valid
    assert verdict.landmarks == ()


def test_validate_names_offending_landmarks(exact_landmarks):
    coords = exact_landmarks.as_array()
    coords[LandmarkId.AR_13] = (-1.0, 0.0)
    coords[LandmarkId.PB_AP] = (math.nan, 10.0)
    verdict = validate_landmark_set(coords, 957, 555)
    assert not verdict.is_valid
    assert set(verdict.landmarks) == {LandmarkId.AR_13, LandmarkId.PB_AP}
    tipos = {f.landmark: f.kind for f in verdict.failures}
    assert tipos[LandmarkId.AR_13] is FailureKind.OUT_OF_BOUNDS
    assert tipos[LandmarkId.PB_AP] is FailureKind.NON_FINITE


def test_landmark_set_rejects_non_finite(exact_landmarks):
    for ruim in (math.nan, math.inf, -math.inf):
        coords = exact_landmarks.as_array()
        coords[LandmarkId.CP, 1] = ruim
        with pytest.raises(NonFiniteInputError):
            LandmarkSet(coords)
        with pytest.raises(NonFiniteInputError):
            LandmarkSet(coords, unchecked=True)


def test_non_finite_prediction_rejected_even_without_bounds(exact_record):
    raw = _raw(exact_record)
    raw[0]['landmarks']['PB_AP'] = [-5.0, 10.0]
    texto = json.dumps(raw)
    (record,) = parse_dataset(texto.encode('utf-8'), check_bounds=False)
    assert record.landmarks[LandmarkId.PB_AP] == (-5.0, 10.0)

    raw[0]['landmarks']['PB_AP'] = [math.nan, 10.0]
    with pytest.raises(ValidationError) as exc:
        parse_dataset(json.dumps(raw).encode('utf-8'), check_bounds=False)
    assert exc.value.details['landmark'] == "PB_AP"


def test_record_rejects_non_positive_spacing(exact_landmarks):
    with pytest.raises(ParameterError):
        make_record("x", exact_landmarks.coords, spacing=-0.1)
