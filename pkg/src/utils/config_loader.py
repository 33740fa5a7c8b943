"""
Config Loader - Scenario configuration loaded from and written to TOML
"""
import logging
import os
import sys
from dataclasses import asdict, dataclass, field, fields

import tomli_w

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from channel.geometry import ArrayGeometry
from channel.sampler import PilotConfig
from utils import constants
from utils.errors import ConfigError

logger = logging.getLogger(__name__)

DEFAULT_SCENARIO = os.path.join(
    os.path.dirname(os.path.dirname(os.path.dirname(__file__))), "data", "default_scenario.toml")


@dataclass
class GeometryConfig:
    """UPA parameters"""

    n_h: int = 16
    n_v: int = 16
    carrier_frequency: float = constants.CARRIER_FREQUENCY
    spacing_h: float = constants.SPACING_WAVELENGTHS  # in wavelengths
    spacing_v: float = constants.SPACING_WAVELENGTHS  # in wavelengths
    bs_height: float = constants.BS_HEIGHT

    @property
    def wavelength(self):
        return constants.SPEED_OF_LIGHT / self.carrier_frequency

    def geometry(self, n_h=None, n_v=None):
        """
        Array layout for this configuration

        Args:
            n_h (int, optional): Override the number of columns
            n_v (int, optional): Override the number of rows

        Returns:
            ArrayGeometry: Geometry in meters
        """
        wavelength = self.wavelength
        return ArrayGeometry(self.n_h if n_h is None else n_h, self.n_v if n_v is None else n_v,
                             self.spacing_h * wavelength, self.spacing_v * wavelength, wavelength)


@dataclass
class SimulationConfig:
    """UE placement, pilot and Monte Carlo parameters"""

    d_min: float = constants.D_MIN
    d_max: float = constants.D_MAX
    azimuth_min_deg: float = constants.AZIMUTH_RANGE_DEG[0]
    azimuth_max_deg: float = constants.AZIMUTH_RANGE_DEG[1]
    spread_azimuth_deg: float = constants.SPREAD_AZIMUTH_DEG
    spread_elevation_deg: float = constants.SPREAD_ELEVATION_DEG
    bandwidth: float = constants.BANDWIDTH
    rho_dbm: float = constants.RHO_DBM
    noise_dbm: float = constants.NOISE_DBM
    tau_p: int = constants.TAU_P
    tau_c: int = constants.TAU_C
    k_ues: int = constants.NUM_UES
    num_ue_drops: int = constants.NUM_UE_DROPS
    num_blocks_per_drop: int = constants.NUM_BLOCKS_PER_DROP
    num_ue_positions: int = constants.NUM_UE_POSITIONS

    def pilot(self, rho_dbm=None):
        """Pilot configuration in watts, optionally at another transmit power"""
        return PilotConfig.from_dbm(self.tau_p, self.rho_dbm if rho_dbm is None else rho_dbm, self.noise_dbm)


@dataclass
class ExperimentConfig:
    """Sweep grids and knobs of the experiment subcommands"""

    seed: int = constants.DEFAULT_SEED
    eta: float = constants.DEFAULT_ETA
    m_observations: int = constants.DEFAULT_M_OBSERVATIONS
    se_k_ues: int = constants.SE_K_UES
    nsae_gamma_db: float = constants.NSAE_GAMMA_DB
    nsae_spread_azimuth_deg: float = constants.NSAE_SPREAD_AZIMUTH_DEG
    complexity_n: int = constants.COMPLEXITY_N
    upa_sizes: list = field(default_factory=lambda: list(constants.SWEEPS["upa_sizes"]))
    ula_sizes: list = field(default_factory=lambda: list(constants.SWEEPS["ula_sizes"]))
    sigma_theta_deg: list = field(default_factory=lambda: list(constants.SWEEPS["sigma_theta_deg"]))
    mean_elevation_deg: list = field(default_factory=lambda: list(constants.SWEEPS["mean_elevation_deg"]))
    nsae_shapes: list = field(default_factory=lambda: [list(s) for s in constants.SWEEPS["nsae_shapes"]])
    m_sweep: list = field(default_factory=lambda: list(constants.SWEEPS["m_observations"]))
    se_m_sweep: list = field(default_factory=lambda: list(constants.SWEEPS["se_m_observations"]))
    rho_sweep_dbm: list = field(default_factory=lambda: list(constants.SWEEPS["rho_dbm"]))
    eta_sweep: list = field(default_factory=lambda: list(constants.SWEEPS["eta"]))
    upa_estimators: list = field(default_factory=lambda: list(constants.UPA_ESTIMATORS))
    ula_estimators: list = field(default_factory=lambda: list(constants.ULA_ESTIMATORS))
    combiners: list = field(default_factory=lambda: list(constants.COMBINERS))
    se_policies: list = field(default_factory=lambda: list(constants.SE_POLICIES))


SECTIONS = {
    "geometry": GeometryConfig,
    "simulation": SimulationConfig,
    "experiment": ExperimentConfig,
}


@dataclass
class ScenarioConfig:
    """Complete scenario: geometry, simulation and experiment sections"""

    geometry: GeometryConfig = field(default_factory=GeometryConfig)
    simulation: SimulationConfig = field(default_factory=SimulationConfig)
    experiment: ExperimentConfig = field(default_factory=ExperimentConfig)

    @classmethod
    def from_dict(cls, data):
        """
        Build a scenario from nested dictionaries; missing fields keep their defaults

        Args:
            data (dict): Mapping with optional geometry/simulation/experiment tables

        Returns:
            ScenarioConfig: Validated scenario
        """
        unknown = set(data) - set(SECTIONS)
        if unknown:
            raise ConfigError(f"unknown config sections: {', '.join(sorted(unknown))}")

        sections = {}
        for name, section_type in SECTIONS.items():
            values = data.get(name, {})
            if not isinstance(values, dict):
                raise ConfigError(f"[{name}] must be a table")
            allowed = {f.name: f for f in fields(section_type)}
            extra = set(values) - set(allowed)
            if extra:
                raise ConfigError(f"unknown keys in [{name}]: {', '.join(sorted(extra))}")
            defaults = section_type()
            converted = {key: _coerce(name, key, value, getattr(defaults, key)) for key, value in values.items()}
            sections[name] = section_type(**converted)

        config = cls(**sections)
        config.validate()
        return config

    @classmethod
    def load(cls, path=None):
        """
        Load a scenario from a TOML file

        Args:
            path (str, optional): File path; the checked-in default scenario when omitted

        Returns:
            ScenarioConfig: Validated scenario
        """
        path = path or DEFAULT_SCENARIO
        try:
            with open(path, "rb") as f:
                data = tomllib.load(f)
        except FileNotFoundError:
            raise ConfigError(f"config file not found: {path}") from None
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"invalid TOML in {path}: {e}") from e
        logger.debug("loaded scenario from %s", path)
        return cls.from_dict(data)

    def to_dict(self):
        return {name: asdict(getattr(self, name)) for name in SECTIONS}

    def to_toml(self):
        return tomli_w.dumps(self.to_dict())

    def save(self, path):
        with open(path, "wb") as f:
            tomli_w.dump(self.to_dict(), f)

    def validate(self):
        """
        Check cross-field constraints

        Raises:
            ConfigError: A constraint is violated
        """
        g, s, e = self.geometry, self.simulation, self.experiment
        checks = [
            (g.n_h >= 1 and g.n_v >= 1, "array dimensions must be positive"),
            (g.carrier_frequency > 0 and g.spacing_h > 0 and g.spacing_v > 0, "carrier and spacings must be positive"),
            (0 < s.d_min < s.d_max, "need 0 < d_min < d_max"),
            (-90 <= s.azimuth_min_deg <= s.azimuth_max_deg <= 90, "azimuth range must lie in [-90, 90] degrees"),
            (s.spread_azimuth_deg >= 0 and s.spread_elevation_deg >= 0, "angular spreads must be nonnegative"),
            (1 <= s.tau_p <= s.tau_c, "need 1 <= tau_p <= tau_c"),
            (1 <= s.k_ues <= s.tau_p, "orthogonal pilots need 1 <= k_ues <= tau_p"),
            (1 <= e.se_k_ues <= s.tau_p, "orthogonal pilots need 1 <= se_k_ues <= tau_p"),
            (s.num_ue_drops >= 1 and s.num_blocks_per_drop >= 1 and s.num_ue_positions >= 1,
             "Monte Carlo sizes must be positive"),
            (0.0 <= e.eta <= 1.0 and all(0.0 <= v <= 1.0 for v in e.eta_sweep), "eta must lie in [0, 1]"),
            (e.m_observations >= 1 and all(m >= 1 for m in e.m_sweep + e.se_m_sweep), "M must be positive"),
            (all(len(shape) == 2 for shape in e.nsae_shapes), "nsae_shapes entries must be [n_h, n_v] pairs"),
        ]
        for ok, message in checks:
            if not ok:
                raise ConfigError(message)


def _coerce(section, key, value, default):
    """Convert a TOML value to the type of the field default"""
    try:
        if isinstance(default, bool):
            return bool(value)
        if isinstance(default, int):
            if isinstance(value, float) and not value.is_integer():
                raise ValueError(f"expected an integer, got {value}")
            return int(value)
        if isinstance(default, float):
            return float(value)
        if isinstance(default, list):
            if not isinstance(value, list):
                raise ValueError("expected an array")
            return list(value)
        return value
    except (TypeError, ValueError) as e:
        raise ConfigError(f"[{section}] {key}: {e}") from e
