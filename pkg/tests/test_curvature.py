import numpy as np
import pytest

from ife import (
    KERNEL,
    CurvatureConfig,
    Padding,
    TooSmall,
    channel_from_array,
    channel_view,
    curvature_map,
    curvature_score,
    curvature_scores,
    feature_map_from_array,
)

ZERO_PAD = CurvatureConfig(padding=Padding.ZERO)


def impulse_channel():
    x = np.zeros((5, 5), dtype=np.float32)
    x[2, 2] = 1.0
    return channel_from_array(x)


def test_kernel_constants():
    expected = np.array(
        [
            [-1 / 16, 5 / 16, -1 / 16],
            [5 / 16, -1.0, 5 / 16],
            [-1 / 16, 5 / 16, -1 / 16],
        ]
    )
    assert np.array_equal(KERNEL, expected)
    assert KERNEL.sum() == 0.0
    assert np.array_equal(KERNEL, KERNEL[::-1])
    assert np.array_equal(KERNEL, KERNEL[:, ::-1])
    assert np.array_equal(KERNEL, KERNEL.T)


@pytest.mark.parametrize("v", [0.0, 1.0, -3.5, 128.0])
@pytest.mark.parametrize("shape", [(3, 3), (4, 7), (16, 16)])
def test_constant_annihilated(v, shape):
    ch = channel_from_array(np.full(shape, v, dtype=np.float32))
    cm = curvature_map(ch)
    assert np.all(cm.values == 0.0)
    assert curvature_score(ch) == 0.0


def test_linear_ramp_interior_zero():
    yy, xx = np.mgrid[0:10, 0:12].astype(np.float64)
    ch = channel_from_array(2.5 * xx - 1.25 * yy + 3.0)
    cm = curvature_map(ch)
    assert np.max(np.abs(cm.values[1:-1, 1:-1])) <= 1e-5


@pytest.mark.parametrize("cfg", [CurvatureConfig(), ZERO_PAD])
def test_impulse_response_is_kernel(cfg):
    cm = curvature_map(impulse_channel(), cfg)
    expected = np.zeros((5, 5))
    expected[1:4, 1:4] = KERNEL
    assert np.allclose(cm.values, expected, atol=0)


def test_impulse_score_derived_value():
    # (1 + 4*(5/16) + 4*(1/16)) / 25, minted against the naive oracle
    assert curvature_score(impulse_channel(), ZERO_PAD) == pytest.approx(0.1, abs=1e-12)


@pytest.mark.parametrize("s", [0.5, 2.0, 10.0])
def test_positive_homogeneity(s, rng):
    x = rng.standard_normal((9, 11)).astype(np.float32)
    base = curvature_score(channel_from_array(x))
    scaled = curvature_score(channel_from_array((s * x.astype(np.float64)).astype(np.float32)))
    assert scaled == pytest.approx(s * base, rel=1e-6)


def test_too_small():
    with pytest.raises(TooSmall):
        curvature_map(channel_from_array(np.zeros((2, 5), dtype=np.float32)))


def test_scores_multi_channel(rng):
    x = np.zeros((2, 5, 5), dtype=np.float32)
    x[1, 2, 2] = 1.0
    fm = feature_map_from_array(x)
    scores = curvature_scores(fm)
    assert scores.scores[0] == 0.0
    assert scores.scores[1] > 0.0


def test_permuting_channels_permutes_scores(rng):
    vals = rng.standard_normal((5, 8, 8)).astype(np.float32)
    perm = rng.permutation(5)
    s0 = curvature_scores(feature_map_from_array(vals)).scores
    s1 = curvature_scores(feature_map_from_array(vals[perm])).scores
    assert np.array_equal(s1, s0[perm])


def test_single_channel_scores_match_scalar(rng):
    vals = rng.standard_normal((1, 6, 7)).astype(np.float32)
    fm = feature_map_from_array(vals)
    assert curvature_scores(fm).scores[0] == curvature_score(channel_view(fm, 0))


def test_parallel_determinism(rng):
    fm = feature_map_from_array(rng.standard_normal((8, 16, 16)).astype(np.float32))
    s1 = curvature_scores(fm, threads=1).scores
    s4 = curvature_scores(fm, threads=4).scores
    assert np.array_equal(s1.view(np.uint64), s4.view(np.uint64))


def test_channel_error_names_channel():
    # feature maps always have H, W >= 3, so force the error via a raw channel
    with pytest.raises(TooSmall):
        curvature_score(channel_from_array(np.zeros((1, 2), dtype=np.float32)))
