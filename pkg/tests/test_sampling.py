import numpy as np
import pytest

from sgtv.errors import DataError
from sgtv.mri import SamplingPattern, mask_counts
from sgtv.sampling import (
    GOLDEN_ANGLE_DEG,
    SCHEMES,
    PatternSpec,
    centered_to_flat,
    generate,
    undersampling_factor,
)


def centered_mask(pattern):
    return np.fft.fftshift(mask_counts(pattern) > 0)


@pytest.mark.parametrize("shape", [(8, 8), (9, 6), (16, 5)])
@pytest.mark.parametrize("axis", ["rows", "cols"])
def test_skip_step_one_is_full(shape, axis):
    p = generate(PatternSpec("cartesian_skip", shape, step=1, axis=axis))
    assert np.array_equal(p.indices, np.arange(shape[0] * shape[1]))
    assert undersampling_factor(p) == 1.0


def test_skip_step_seven():
    p = generate(PatternSpec("cartesian_skip", (70, 64), step=7, axis="rows"))
    assert len(p) == 640
    rows, _ = p.rows_cols()
    assert set(rows.tolist()) == set(range(0, 70, 7))


def test_radial_two_spokes():
    p = generate(PatternSpec("radial_uniform", (64, 64), n_spokes=2))
    assert len(p) <= 128
    m = centered_mask(p)
    # two diameters through the centre pixel (32, 32)
    assert m[32].all() and m[:, 32].all()
    assert m.sum() == 127
    # point symmetric about DC except the unpaired -H/2 row and column
    inner = m[1:, 1:]
    assert np.array_equal(inner, inner[::-1, ::-1])


def test_radial_golden_angles_and_symmetry():
    assert GOLDEN_ANGLE_DEG == pytest.approx(111.246117974981, abs=1e-9)
    p = generate(PatternSpec("radial_golden", (64, 64), n_spokes=16))
    inner = centered_mask(p)[1:, 1:]
    assert np.array_equal(inner, inner[::-1, ::-1])
    assert 4.0 < undersampling_factor(p) < 8.0


@pytest.mark.parametrize("fraction, factor", [(0.25, 4.0), (0.125, 8.0), (0.5, 2.0)])
def test_random_cartesian_factor(fraction, factor):
    p = generate(PatternSpec("cartesian_random", (128, 128), fraction=fraction, seed=3))
    assert undersampling_factor(p) == pytest.approx(factor)
    rows, _ = p.rows_cols()
    assert 0 in rows


def test_random_cartesian_seeds():
    a = generate(PatternSpec("cartesian_random", (64, 64), fraction=0.25, seed=1))
    b = generate(PatternSpec("cartesian_random", (64, 64), fraction=0.25, seed=1))
    c = generate(PatternSpec("cartesian_random", (64, 64), fraction=0.25, seed=2))
    assert np.array_equal(a.indices, b.indices)
    assert not np.array_equal(a.indices, c.indices)


def test_half_sampling_factor():
    assert undersampling_factor(SamplingPattern((4, 4), np.arange(8))) == 2.0


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("shape", [(32, 32), (33, 47)])
def test_every_scheme_unique_sorted_with_dc(scheme, shape):
    p = generate(PatternSpec(scheme, shape))
    assert p.indices[0] == 0
    assert np.all(np.diff(p.indices) > 0)
    assert np.array_equal(generate(PatternSpec(scheme, shape)).indices, p.indices)


def test_spirals_are_centre_weighted():
    for scheme in ("spiral_vd", "spiral_phyllotaxis"):
        m = centered_mask(generate(PatternSpec(scheme, (64, 64))))
        centre = m[24:40, 24:40].mean()
        assert centre > m.mean()


def test_phyllotaxis_point_count_bounds_samples():
    p = generate(PatternSpec("spiral_phyllotaxis", (64, 64), n_points=300))
    assert len(p) <= 301


def test_centered_to_flat():
    assert centered_to_flat((4, 4), [0, -1, -2, 1], [0, -1, 1, -2]).tolist() == [0, 15, 9, 6]
    # +H/2 lies outside the centred range and is dropped
    assert centered_to_flat((4, 4), [2], [0]).size == 0


@pytest.mark.parametrize("text", [
    "cartesian_skip:7:rows", "cartesian_random:0.125:5:cols", "radial_uniform:8",
    "radial_golden:16", "spiral_vd:8:1000:1.5", "spiral_phyllotaxis:2048",
])
def test_parse_label_round_trip(text):
    spec = PatternSpec.parse(text, (32, 32))
    again = PatternSpec.parse(spec.label(), (32, 32))
    assert again == spec


def test_parse_seed_override():
    assert PatternSpec.parse("cartesian_random:0.25", (8, 8), seed=9).seed == 9
    assert PatternSpec.parse("cartesian_random:0.25:4", (8, 8), seed=9).seed == 4


@pytest.mark.parametrize("text", ["zigzag:3", "radial_golden:x", "cartesian_skip:0",
                                  "radial_golden:1:2", "cartesian_random:1.5"])
def test_parse_rejects(text):
    with pytest.raises(DataError):
        PatternSpec.parse(text, (16, 16))
