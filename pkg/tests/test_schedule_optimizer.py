"""Testes da agenda de lr e do AdamW"""

import numpy as np
import pytest
from numpy.testing import assert_array_equal

from src.services.training.optimizer import AdamWState, adamw_step
from src.services.training.schedule import LrSchedule, lr_factor
from src.utils.exceptions import DimensionError, ParameterError


# ============================================
# AGENDA
# ============================================

def test_schedule_reference_points():
    agenda = LrSchedule()
    assert lr_factor(0, 0, agenda) == pytest.approx(0.001)
    assert lr_factor(500, 0, agenda) == 1.0
    assert lr_factor(10000, 200, agenda) == pytest.approx(0.01)


def test_schedule_warmup_is_linear_and_continuous():
    agenda = LrSchedule()
    fatores = [lr_factor(s, 0, agenda) for s in range(0, 501)]
    diferencas = np.diff(fatores)
    assert np.allclose(diferencas, (1 - 0.001) / 500)
    assert lr_factor(499, 0, agenda) < lr_factor(500, 0, agenda) == lr_factor(501, 0, agenda)


def test_schedule_milestones():
    agenda = LrSchedule(warmup_steps=0)
    assert lr_factor(0, 169, agenda) == 1.0
    assert lr_factor(0, 170, agenda) == pytest.approx(0.1)
    assert agenda.learning_rate(0, 199) == pytest.approx(5e-5)


def test_schedule_validation():
    with pytest.raises(ParameterError):
        LrSchedule(milestones=(200, 170))
    with pytest.raises(ParameterError):
        LrSchedule(gamma=1.5)
    with pytest.raises(ParameterError):
        lr_factor(-1, 0, LrSchedule())


# ============================================
# ADAMW
# ============================================

def test_zero_gradient_without_decay_is_fixed_point():
    params = {'w': np.array([1.0, -2.0])}
    novos, estado = adamw_step(params, {'w': np.zeros(2)}, AdamWState(weight_decay=0.0), 1e-3)
    assert_array_equal(novos['w'], params['w'])
    assert_array_equal(estado.first_moment['w'], np.zeros(2))
    assert_array_equal(estado.second_moment['w'], np.zeros(2))


def test_single_step_hand_value():
    novos, estado = adamw_step({'w': np.array([1.0])}, {'w': np.array([1.0])}, AdamWState(), 0.001)
    assert novos['w'][0] == pytest.approx(1 - 0.001 / (1 + 1e-8) - 0.001 * 0.01, abs=1e-15)
    assert novos['w'][0] == pytest.approx(0.998990, abs=1e-6)
    assert estado.step_count == 1


def test_decoupled_decay_is_geometric():
    params = {'w': np.array([2.0])}
    estado = AdamWState(weight_decay=0.01)
    for _ in range(2):
        params, estado = adamw_step(params, {'w': np.zeros(1)}, estado, 0.1)
    assert params['w'][0] == pytest.approx(2.0 * (1 - 0.1 * 0.01) ** 2, rel=1e-12)


def test_functional_step_leaves_inputs_untouched():
    params = {'w': np.array([1.0, 2.0])}
    estado = AdamWState()
    adamw_step(params, {'w': np.ones(2)}, estado, 0.01)
    assert_array_equal(params['w'], [1.0, 2.0])
    assert estado.step_count == 0 and not estado.first_moment


def test_shape_mismatch():
    with pytest.raises(DimensionError):
        adamw_step({'w': np.zeros(2)}, {'w': np.zeros(3)}, AdamWState(), 0.01)
    with pytest.raises(DimensionError):
        adamw_step({'w': np.zeros(2)}, {'v': np.zeros(2)}, AdamWState(), 0.01)
