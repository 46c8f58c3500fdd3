import math

import numpy as np
import pytest

from ottokiln import (
    FockDistribution,
    InitialStateSpec,
    OscillatorSpec,
    OttoKilnError,
    UnderTruncationError,
    entropy,
    internal_energy,
    make_distribution,
    mean_occupation,
    total_variation,
)

# Geometric-ladder reference values, computed from the closed forms
# P_n = (1 - q) q^n with q = exp(-omega/T) and cross-checked by direct
# summation to n = 200.
Q_COLD = 0.0820849986238988          # exp(-2.5)
P0_COLD = 0.9179150013761012         # 1 - exp(-2.5)
NBAR_COLD = 0.08942548983385201      # 1 / (e^2.5 - 1)
NBAR_HOT = 0.4015511184930129        # 1 / (e^1.25 - 1)
S_COLD = 0.3092142083266683


def test_ground_state_is_pure_level_zero():
    dist = make_distribution(InitialStateSpec.ground(), 50)
    assert dist.probs[0] == 1.0
    assert dist.probs[1:].sum() == 0.0


def test_equal_lowest_three_uniform():
    dist = make_distribution(InitialStateSpec.equal_lowest(3), 50)
    np.testing.assert_allclose(dist.probs[:3], 1.0 / 3.0, rtol=1e-15)
    assert dist.probs[3:].sum() == 0.0


def test_boltzmann_distribution_matches_geometric_closed_form():
    dist = make_distribution(InitialStateSpec.boltzmann(1.0, 0.4), 50)
    assert dist.probs[0] == pytest.approx(P0_COLD, abs=1e-12)
    ratios = dist.probs[1:6] / dist.probs[:5]
    np.testing.assert_allclose(ratios, Q_COLD, rtol=1e-13)


def test_single_level_state():
    dist = make_distribution(InitialStateSpec.single_level(1), 50)
    assert dist.probs[1] == 1.0
    assert mean_occupation(dist) == 1.0


def test_gaussian_state_is_normalized_and_peaked_at_center():
    spec = InitialStateSpec.gaussian(2, 1.5, 1.2)
    dist = make_distribution(spec, 50)
    assert dist.probs.sum() == pytest.approx(1.0, abs=1e-12)
    assert int(dist.probs.argmax()) == 2
    # symmetric neighbours of the center carry equal weight
    assert dist.probs[1] == pytest.approx(dist.probs[3], rel=1e-12)


def test_internal_energy_examples():
    ground = make_distribution(InitialStateSpec.ground(), 50)
    assert internal_energy(ground, OscillatorSpec(2.7)) == 0.0
    equal3 = make_distribution(InitialStateSpec.equal_lowest(3), 50)
    assert internal_energy(equal3, 1.5) == pytest.approx(1.5, rel=1e-14)
    thermal = make_distribution(InitialStateSpec.boltzmann(1.5, 1.2), 50)
    assert internal_energy(thermal, 1.5) == pytest.approx(1.5 * NBAR_HOT, rel=1e-12)


def test_mean_occupation_examples():
    assert mean_occupation(make_distribution(InitialStateSpec.ground(), 20)) == 0.0
    assert mean_occupation(make_distribution(InitialStateSpec.equal_lowest(3), 20)) == pytest.approx(1.0, rel=1e-14)
    thermal = make_distribution(InitialStateSpec.boltzmann(1.5, 1.2), 50)
    assert mean_occupation(thermal) == pytest.approx(NBAR_HOT, rel=1e-12)


def test_entropy_examples():
    assert entropy(make_distribution(InitialStateSpec.ground(), 20)) == 0.0
    equal3 = make_distribution(InitialStateSpec.equal_lowest(3), 20)
    assert entropy(equal3) == pytest.approx(math.log(3), rel=1e-14)
    thermal = make_distribution(InitialStateSpec.boltzmann(1.0, 0.4), 50)
    assert entropy(thermal) == pytest.approx(S_COLD, abs=1e-12)


def test_entropy_handles_zero_entries():
    dist = FockDistribution(np.array([0.5, 0.0, 0.5]))
    assert entropy(dist) == pytest.approx(math.log(2), rel=1e-14)


def test_total_variation():
    a = FockDistribution(np.array([1.0, 0.0]))
    b = FockDistribution(np.array([0.0, 1.0]))
    assert total_variation(a, b) == 1.0
    assert total_variation(a, a) == 0.0


def test_distribution_rejects_negative_entries():
    with pytest.raises(OttoKilnError, match="negative"):
        FockDistribution(np.array([1.1, -0.1]))


def test_distribution_rejects_bad_normalization():
    with pytest.raises(OttoKilnError, match="sum"):
        FockDistribution(np.array([0.6, 0.3]))


def test_hot_boltzmann_needs_enough_levels():
    with pytest.raises(UnderTruncationError):
        make_distribution(InitialStateSpec.boltzmann(0.2, 2.0), 10)


def test_single_level_above_cap_rejected():
    with pytest.raises(UnderTruncationError):
        make_distribution(InitialStateSpec.single_level(12), 10)


def test_invalid_spec_parameters_rejected():
    with pytest.raises(OttoKilnError):
        InitialStateSpec.equal_lowest(0)
    with pytest.raises(OttoKilnError):
        InitialStateSpec.boltzmann(-1.0, 0.4)
    with pytest.raises(OttoKilnError):
        InitialStateSpec.gaussian(2, 1.5, -0.1)
    with pytest.raises(OttoKilnError):
        OscillatorSpec(0.0)
