import pytest

from ottokiln import ConfigError, EngineConfig, parse_config
from ottokiln.fock import InitialStateSpec


def test_empty_document_yields_default_working_point():
    config = parse_config("")
    assert config.mode == "otto"
    assert config.omega_c == 1.0
    assert config.omega_h == 1.5
    assert config.t_c == 0.4
    assert config.t_h == 1.2
    assert config.gamma0 == 0.5  # relaxation time 1/(2*gamma0) = 1
    assert config.tau == 2.0
    assert config.n_cycles == 20
    assert config.n_max == 50
    assert config.dt is None
    assert config.initial_state == InitialStateSpec.ground()
    assert config.pump_target == InitialStateSpec.single_level(1)


def test_relaxation_time_sets_gamma0():
    config = parse_config("relaxation_time = 10\n")
    assert config.gamma0 == pytest.approx(0.05, rel=1e-15)


def test_gamma0_and_relaxation_time_conflict():
    with pytest.raises(ConfigError, match="relaxation_time"):
        parse_config("gamma0 = 0.5\nrelaxation_time = 1\n")


def test_negative_frequency_names_key():
    with pytest.raises(ConfigError, match="omega_h"):
        parse_config("omega_h = -1\n")


def test_unknown_key_names_key_and_line():
    with pytest.raises(ConfigError, match=r"line 2.*frequency"):
        parse_config("tau = 1.0\nfrequency = 2\n")


def test_unknown_section_rejected():
    with pytest.raises(ConfigError, match=r"line 1.*reactor"):
        parse_config("[reactor]\n")


def test_duplicate_key_rejected():
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config("tau = 1\ntau = 2\n")


def test_type_mismatch_names_key_and_line():
    with pytest.raises(ConfigError, match=r"line 1.*tau"):
        parse_config("tau = fast\n")
    with pytest.raises(ConfigError, match=r"line 1.*n_cycles"):
        parse_config("n_cycles = 2.5\n")


def test_sections_and_comments_are_accepted():
    text = """
# engine working point
[engine]
omega_h = 2.0   # compressed frequency
tau = 1.5

[baths]
t_h = 1.6

[state]
initial_state = equal_lowest:3
"""
    config = parse_config(text)
    assert config.omega_h == 2.0
    assert config.tau == 1.5
    assert config.t_h == 1.6
    assert config.initial_state == InitialStateSpec.equal_lowest(3)


def test_state_spec_parsing_variants():
    assert parse_config("initial_state = ground\n").initial_state == InitialStateSpec.ground()
    assert parse_config("initial_state = level:2\n").initial_state == InitialStateSpec.single_level(2)
    assert (parse_config("initial_state = boltzmann:1.5:1.2\n").initial_state
            == InitialStateSpec.boltzmann(1.5, 1.2))
    explicit = parse_config("initial_state = gaussian:3:1.0:0.5\n").initial_state
    assert explicit == InitialStateSpec.gaussian(3, 1.0, 0.5)


def test_gaussian_defaults_resolve_to_hot_working_point():
    config = parse_config("initial_state = gaussian\nomega_h = 2.0\nt_h = 1.6\n")
    assert config.initial_state == InitialStateSpec.gaussian(2, 2.0, 1.6)
    shifted = parse_config("initial_state = gaussian:4\n")
    assert shifted.initial_state == InitialStateSpec.gaussian(4, 1.5, 1.2)


def test_bad_state_spec_rejected():
    with pytest.raises(ConfigError, match="initial_state"):
        parse_config("initial_state = plasma\n")
    with pytest.raises(ConfigError, match="pump_target"):
        parse_config("pump_target = level:one\n")


def test_mode_override_consistency():
    assert parse_config("", mode_override="pump").mode == "pump"
    assert parse_config("mode = pump\n", mode_override="pump").mode == "pump"
    with pytest.raises(ConfigError, match="mode"):
        parse_config("mode = pump\n", mode_override="otto")


def test_frequency_ordering_enforced():
    with pytest.raises(ConfigError, match="omega_c"):
        parse_config("omega_c = 2.0\nomega_h = 1.5\n")


def test_temperature_ordering_enforced_for_two_bath_modes():
    with pytest.raises(ConfigError, match="t_c"):
        parse_config("t_c = 1.3\n")
    # pump mode uses the cold bath only; hotter t_c is fine there
    config = parse_config("t_c = 1.3\n", mode_override="pump")
    assert config.t_c == 1.3


def test_sweep_list_parsing():
    config = parse_config("sweep_t_h = 1.2, 1.6\nsweep_ratio_steps = 10\n")
    assert config.sweep_t_h == (1.2, 1.6)
    assert config.sweep_ratio_steps == 10
    with pytest.raises(ConfigError, match="sweep_t_h"):
        parse_config("sweep_t_h = 1.2; 1.6\n")


def test_missing_value_and_missing_equals_sign():
    with pytest.raises(ConfigError, match="empty value"):
        parse_config("tau =\n")
    with pytest.raises(ConfigError, match="key = value"):
        parse_config("tau 2.0\n")


def test_validate_catches_bad_defaults_combinations():
    config = EngineConfig(n_cycles=-1)
    with pytest.raises(ConfigError, match="n_cycles"):
        config.validate()
