"""Tests for scenario configuration and unit conversions."""

import pytest

from utils.config_loader import DEFAULT_SCENARIO, ScenarioConfig
from utils.constants import NOISE_DBM, RHO_DBM, SWEEPS, TAU_P, WAVELENGTH
from utils.errors import ConfigError
from utils.units import db_to_linear, dbm_to_watt, linear_to_db, watt_to_dbm


class TestScenarioConfig:
    def test_default_file_matches_constants(self, default_config):
        assert default_config.geometry.n_h == 16
        assert default_config.geometry.wavelength == pytest.approx(WAVELENGTH)
        assert default_config.simulation.tau_p == TAU_P
        assert default_config.simulation.rho_dbm == RHO_DBM
        assert default_config.simulation.noise_dbm == NOISE_DBM
        assert default_config.experiment.upa_sizes == SWEEPS["upa_sizes"]

    def test_default_file_equals_built_in_defaults(self, default_config):
        assert default_config == ScenarioConfig()

    def test_geometry_in_meters(self, default_config):
        geometry = default_config.geometry.geometry(8, 2)
        assert (geometry.n_h, geometry.n_v) == (8, 2)
        assert geometry.delta_h == pytest.approx(0.025)

    def test_pilot_at_other_power(self, default_config):
        assert default_config.simulation.pilot(30.0).rho == pytest.approx(1.0)

    def test_toml_round_trip(self, tmp_path):
        config = ScenarioConfig.from_dict({"geometry": {"n_h": 8, "n_v": 4}, "experiment": {"eta": 0.5}})
        path = tmp_path / "scenario.toml"
        config.save(str(path))
        assert ScenarioConfig.load(str(path)) == config
        assert "n_h = 8" in config.to_toml()

    def test_partial_file_keeps_defaults(self, tmp_path):
        path = tmp_path / "partial.toml"
        path.write_text("[simulation]\ntau_p = 12\n")
        config = ScenarioConfig.load(str(path))
        assert config.simulation.tau_p == 12
        assert config.simulation.tau_c == 200

    def test_integer_fields_coerced(self):
        assert ScenarioConfig.from_dict({"simulation": {"k_ues": 4.0}}).simulation.k_ues == 4

    @pytest.mark.parametrize("data, message", [
        ({"render": {}}, "unknown config sections"),
        ({"geometry": {"n_x": 3}}, "unknown keys"),
        ({"simulation": "fast"}, "must be a table"),
        ({"simulation": {"k_ues": 2.5}}, "integer"),
        ({"simulation": {"k_ues": 11}}, "orthogonal pilots"),
        ({"simulation": {"d_min": 50.0, "d_max": 10.0}}, "d_min"),
        ({"experiment": {"eta": 1.5}}, "eta"),
        ({"experiment": {"nsae_shapes": [[16, 16, 1]]}}, "pairs"),
    ])
    def test_invalid_values_rejected(self, data, message):
        with pytest.raises(ConfigError, match=message):
            ScenarioConfig.from_dict(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError, match="not found"):
            ScenarioConfig.load(str(tmp_path / "absent.toml"))

    def test_invalid_toml(self, tmp_path):
        path = tmp_path / "broken.toml"
        path.write_text("[geometry\n")
        with pytest.raises(ConfigError, match="invalid TOML"):
            ScenarioConfig.load(str(path))

    def test_default_path_exists(self):
        assert DEFAULT_SCENARIO.endswith("default_scenario.toml")


class TestUnits:
    def test_db_round_trip(self):
        assert linear_to_db(db_to_linear(13.0)) == pytest.approx(13.0)

    def test_reference_powers(self):
        assert dbm_to_watt(30.0) == pytest.approx(1.0)
        assert dbm_to_watt(20.0) == pytest.approx(0.1)
        assert watt_to_dbm(1e-3) == pytest.approx(0.0)
