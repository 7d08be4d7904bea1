import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from trinecap import optics
from trinecap.pwcode import codeword, codewords, pair_channel


def test_encoder_table_reproduces_codewords():
    for x in range(3):
        assert np.max(np.abs(optics.encode_optical(x).amplitudes - codeword(x).amplitudes)) < 1e-12


def test_encoder_rejects_unknown_letter():
    with pytest.raises(ValueError):
        optics.encode_optical(3)


@given(st.floats(-np.pi, np.pi))
def test_hwp_is_involutory(theta):
    j = optics.hwp_jones(theta)
    assert np.allclose(j @ j, np.eye(2), atol=1e-12)


@given(st.floats(-np.pi, np.pi))
def test_rotator_is_a_rotation(phi):
    r = optics.rotator_jones(phi)
    assert np.allclose(r, [[np.cos(phi), -np.sin(phi)], [np.sin(phi), np.cos(phi)]], atol=1e-12)


@given(st.floats(0, 1))
def test_pbs_is_orthogonal(extinction):
    m = optics.pbs_transfer(extinction)
    assert np.allclose(m.T @ m, np.eye(4), atol=1e-12)


def test_pbs_rejects_bad_extinction():
    with pytest.raises(ValueError):
        optics.pbs_transfer(1.2)


def test_ideal_decoder_channel():
    rows = np.array([optics.decode_optical(cw) for cw in codewords()])
    assert np.allclose(rows, pair_channel().matrix, atol=1e-12)


def test_extinction_lowers_diagonal():
    row = optics.decode_optical(codeword(0), pbs_extinction=0.98)
    assert row[0] < pair_channel().matrix[0, 0]
    assert row.sum() <= 1 + 1e-12


@given(st.floats(0, 1))
def test_visibility_keeps_probabilities_normalized(v):
    for cw in codewords():
        d = optics.detector_distribution(cw, visibility=v)
        assert d.min() >= 0 and d.sum() == pytest.approx(1.0)


def test_element_validation():
    with pytest.raises(ValueError):
        optics.OpticalElement("lens")
