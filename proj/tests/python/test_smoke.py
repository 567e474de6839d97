import math
import os
import subprocess

import numpy as np
import pytest

import mhfseg

TWO_TONE = """seed = 3
[section]
kind = tone
duration_ms = 300
frequency_hz = 700

[section]
kind = tone
duration_ms = 260
frequency_hz = 2300
"""


def test_synthesize_and_segment():
    synth = mhfseg.synthesize(TWO_TONE)
    assert synth["sample_rate"] == 8000
    assert synth["boundary_samples"] == [2400]
    gt = synth["boundary_frames"][0]

    seg = mhfseg.segment(synth["samples"], levels=[0.5])
    (threshold, boundaries), = seg["levels"]
    assert threshold == 0.5
    assert len(boundaries) == 1 and abs(boundaries[0] - gt) <= 1
    assert seg["energy_marks"] == []
    assert len(seg["values"]) == len(seg["frame_times"]) == len(seg["normalized"])


def test_wav_round_trip(tmp_path):
    x = np.array([0.0, 0.5, -0.5, 2.0])
    path = tmp_path / "a.wav"
    assert mhfseg.save_wav(x, 8000, path) == 1
    y, rate = mhfseg.load_wav(path)
    assert rate == 8000
    assert np.allclose(y, [0.0, 0.5, -0.5, 32767 / 32768])


def test_spectral_helpers():
    n = np.arange(128)
    spec = mhfseg.magnitude_spectrum(np.cos(2 * np.pi * 16 * n / 128))
    assert spec.shape == (65,)
    assert spec[16] == pytest.approx(64.0)
    assert mhfseg.frame_signal(np.zeros(256)).shape == (3, 128)
    assert list(mhfseg.autocorrelation(np.ones(4), 1)) == [4.0, 3.0]
    a, silent = mhfseg.lpc_coefficients(np.zeros(128), 10)
    assert silent and not a.any()
    assert mhfseg.analyze(np.sin(n / 3.0).repeat(10), analysis="lpc").shape[1] == 10


def test_measures():
    assert mhfseg.dist([1.0, 0.0], [0.0, 1.0], "l1") == 2.0
    assert mhfseg.dist([1.0, 0.0], [0.0, 1.0], "l2") == pytest.approx(math.sqrt(2))
    assert mhfseg.pinv_energy([1.0, 2.0], [2.0, 4.0]) == 2.5


def test_step_trace_and_window_usage():
    rows = np.zeros((30, 1))
    rows[15:] = 1.0
    tr = mhfseg.variation_function(rows)
    nz = np.nonzero(tr["values"])[0]
    assert list(nz) == [14, 15]
    assert np.allclose(tr["values"][nz], 0.5)
    usage = mhfseg.window_usage(tr["values"], tr["argmin_index"], 4, 0.1)
    assert usage[0] == 50.0 and usage[4] == 50.0


def test_segmenter_and_evaluation_helpers():
    values = np.array([0.0, 0.6, 0.6, 0.2, 1.0, 0.9, 0.0, 0.45, 0.0, 0.8])
    assert mhfseg.pick_peaks(values, 0.5, 1) == [1, 4, 9]
    levels = mhfseg.multilevel(values, [0.7, 0.4], 1)
    assert set(levels[0][1]) <= set(levels[1][1])
    assert mhfseg.energy_marks(np.array([2.0, 2.6, 2.0, 2.0]), 2.5, 4) == [1]
    assert mhfseg.local_normalize(np.array([1.0, 2.0, 4.0]), [])[2] == 1.0
    rep = mhfseg.match_boundaries([10, 20], [11, 40], 2)
    assert (rep["hits"], rep["misses"], rep["false_alarms"]) == (1, 1, 1)
    assert mhfseg.peak_widths(np.array([0, 1, 2, 4, 2, 1, 0.0]), 0.5) == [(3, 3)]


def test_noise():
    synth = mhfseg.synthesize(TWO_TONE)
    noisy, clipped = mhfseg.add_gaussian_noise(synth["samples"], 20.0, 1)
    assert clipped == 0
    snr = 10 * np.log10(np.sum(synth["samples"] ** 2) / np.sum((noisy - synth["samples"]) ** 2))
    assert abs(snr - 20.0) < 0.5
    assert np.array_equal(mhfseg.add_impulse_noise(synth["samples"], 0.0, 1.0, 5), synth["samples"])


def test_errors_carry_kind(tmp_path):
    with pytest.raises(mhfseg.MhfsegError) as info:
        mhfseg.load_wav(tmp_path / "missing.wav")
    assert info.value.kind == "NotFound"
    with pytest.raises(ValueError):
        mhfseg.synthesize("[section]\nkind = tone\nduration_ms = -1\n")
    with pytest.raises(mhfseg.MhfsegError):
        mhfseg.variation_function(np.zeros((8, 2)))


@pytest.mark.skipif("MHFSEG_CLI" not in os.environ, reason="CLI path not provided")
def test_cli_help():
    out = subprocess.run([os.environ["MHFSEG_CLI"], "--help"], capture_output=True, text=True)
    assert out.returncode == 0
    assert "segment" in out.stdout
