"""Engine configuration: defaults, plain-text parsing, validation.

Config documents are UTF-8 ``key = value`` lines with optional ``[section]``
headers ("engine", "baths", "state", "sweep", "output") and ``#`` comments.
Keys are globally unique; unknown keys and sections are hard errors, and
every error names the offending key and line.  An empty document yields the
default working point: omega_c=1.0, omega_h=1.5, t_c=0.4, t_h=1.2,
gamma0=0.5 (relaxation time 1), tau=2.0.
"""

import math
from dataclasses import dataclass, field, replace

from .exceptions import ConfigError, OttoKilnError
from .fock import DEFAULT_N_MAX, InitialStateSpec, TAIL_TOLERANCE

_SECTIONS = ("engine", "baths", "state", "sweep", "output")

_FLOAT_KEYS = {
    "omega_c", "omega_h", "t_c", "t_h", "gamma0", "relaxation_time",
    "tau", "tau_bc", "tau_cd", "tau_db", "dt", "tail_tolerance",
    "sweep_ratio_min", "sweep_ratio_max",
}
_INT_KEYS = {"n_cycles", "n_max", "sample_stride", "sweep_ratio_steps", "csv_levels"}
_STR_KEYS = {"mode", "initial_state", "pump_target", "sweep_mode"}
_LIST_KEYS = {"sweep_t_h"}
_ALL_KEYS = _FLOAT_KEYS | _INT_KEYS | _STR_KEYS | _LIST_KEYS

_MODES = ("otto", "pump", "sweep")


@dataclass(frozen=True)
class EngineConfig:
    mode: str = "otto"
    omega_c: float = 1.0
    omega_h: float = 1.5
    t_c: float = 0.4
    t_h: float = 1.2
    gamma0: float = 0.5
    tau: float = 2.0
    tau_bc: float = 1.0
    tau_cd: float = 5.0
    tau_db: float = 1.0
    n_cycles: int = 20
    n_max: int = DEFAULT_N_MAX
    dt: float = None
    sample_stride: int = None
    initial_state: InitialStateSpec = field(default_factory=InitialStateSpec.ground)
    pump_target: InitialStateSpec = field(default_factory=lambda: InitialStateSpec.single_level(1))
    sweep_t_h: tuple = (0.8, 1.2, 1.6, 2.0)
    sweep_ratio_steps: int = 99
    sweep_ratio_min: float = None
    sweep_ratio_max: float = None
    sweep_mode: str = "balance"
    csv_levels: int = 8
    tail_tolerance: float = TAIL_TOLERANCE
    backend: str = None  # kernel backend override; not a config-file key

    @property
    def cycle_time(self):
        if self.mode == "pump":
            return self.tau_bc + self.tau_cd + self.tau_db
        return 4.0 * self.tau

    def validate(self):
        if self.mode not in _MODES:
            raise ConfigError(f"mode must be one of {_MODES}, got {self.mode!r}")
        positives = [
            ("omega_c", self.omega_c), ("omega_h", self.omega_h),
            ("t_c", self.t_c), ("t_h", self.t_h), ("gamma0", self.gamma0),
            ("tau", self.tau), ("tau_bc", self.tau_bc), ("tau_cd", self.tau_cd),
            ("tau_db", self.tau_db), ("tail_tolerance", self.tail_tolerance),
        ]
        if self.dt is not None:
            positives.append(("dt", self.dt))
        for name, value in positives:
            if not value > 0:
                raise ConfigError(f"{name} must be positive, got {value}")
        if not self.omega_c < self.omega_h:
            raise ConfigError(
                f"omega_c must be below omega_h, got {self.omega_c} >= {self.omega_h}"
            )
        if self.mode in ("otto", "sweep") and not self.t_c < self.t_h:
            raise ConfigError(f"t_c must be below t_h, got {self.t_c} >= {self.t_h}")
        if self.n_cycles < 0:
            raise ConfigError(f"n_cycles must be >= 0, got {self.n_cycles}")
        if self.n_max < 1:
            raise ConfigError(f"n_max must be >= 1, got {self.n_max}")
        if self.sample_stride is not None and self.sample_stride < 1:
            raise ConfigError(f"sample_stride must be >= 1, got {self.sample_stride}")
        if self.csv_levels < 1:
            raise ConfigError(f"csv_levels must be >= 1, got {self.csv_levels}")
        if self.sweep_mode not in ("balance", "finite"):
            raise ConfigError(f"sweep_mode must be 'balance' or 'finite', got {self.sweep_mode!r}")
        if self.sweep_ratio_steps < 2:
            raise ConfigError(f"sweep_ratio_steps must be >= 2, got {self.sweep_ratio_steps}")
        if self.mode == "sweep":
            for t_h in self.sweep_t_h:
                if not t_h > self.t_c:
                    raise ConfigError(f"sweep_t_h entry {t_h} must exceed t_c={self.t_c}")
        for name in ("sweep_ratio_min", "sweep_ratio_max"):
            value = getattr(self, name)
            if value is not None and not 0.0 < value < 1.0:
                raise ConfigError(f"{name} must lie in (0, 1), got {value}")
        return self


def _parse_state_spec(key, raw, line):
    parts = [p.strip() for p in raw.split(":")]
    kind = parts[0]
    try:
        if kind == "ground" and len(parts) == 1:
            return InitialStateSpec.ground()
        if kind == "level" and len(parts) == 2:
            return InitialStateSpec.single_level(int(parts[1]))
        if kind == "equal_lowest" and len(parts) == 2:
            return InitialStateSpec.equal_lowest(int(parts[1]))
        if kind == "boltzmann" and len(parts) == 3:
            return InitialStateSpec.boltzmann(float(parts[1]), float(parts[2]))
        if kind == "gaussian" and len(parts) in (1, 2, 4):
            center = int(parts[1]) if len(parts) >= 2 else 2
            if len(parts) == 4:
                return InitialStateSpec.gaussian(center, float(parts[2]), float(parts[3]))
            # reference frequency/temperature filled in from omega_h/t_h later
            return InitialStateSpec(kind="gaussian", center=center)
    except (ValueError, OttoKilnError) as exc:
        raise ConfigError(f"{key}: invalid state spec {raw!r} ({exc})", line) from exc
    raise ConfigError(
        f"{key}: unknown state spec {raw!r}; expected ground, level:N, equal_lowest:K, "
        "boltzmann:OMEGA:T or gaussian[:CENTER[:OMEGA_REF:T_REF]]", line,
    )


def _resolve_gaussian(spec, omega_h, t_h):
    if spec.kind == "gaussian" and spec.omega_ref == 0.0:
        return InitialStateSpec.gaussian(spec.center, omega_h, t_h)
    return spec


def parse_config(text, mode_override=None):
    """Parse a config document into a validated EngineConfig."""
    values = {}
    lines = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip().lower()
            if section not in _SECTIONS:
                raise ConfigError(f"unknown section [{section}]", lineno)
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw_line.strip()!r}", lineno)
        key, _, value = line.partition("=")
        key = key.strip().lower()
        value = value.strip()
        if key not in _ALL_KEYS:
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        if not value:
            raise ConfigError(f"{key}: empty value", lineno)
        values[key] = value
        lines[key] = lineno

    if "gamma0" in values and "relaxation_time" in values:
        raise ConfigError(
            "gamma0 and relaxation_time are two spellings of the same parameter; give one",
            lines["relaxation_time"],
        )

    kwargs = {}
    for key, raw in values.items():
        lineno = lines[key]
        if key in _FLOAT_KEYS:
            try:
                parsed = float(raw)
            except ValueError as exc:
                raise ConfigError(f"{key}: expected a number, got {raw!r}", lineno) from exc
            if not math.isfinite(parsed):
                raise ConfigError(f"{key}: value must be finite, got {raw!r}", lineno)
            if key == "relaxation_time":
                if not parsed > 0:
                    raise ConfigError(f"relaxation_time must be positive, got {parsed}", lineno)
                kwargs["gamma0"] = 1.0 / (2.0 * parsed)
            else:
                kwargs[key] = parsed
        elif key in _INT_KEYS:
            try:
                parsed = int(raw)
            except ValueError as exc:
                raise ConfigError(f"{key}: expected an integer, got {raw!r}", lineno) from exc
            kwargs[key] = parsed
        elif key in _LIST_KEYS:
            try:
                kwargs[key] = tuple(float(part) for part in raw.split(","))
            except ValueError as exc:
                raise ConfigError(f"{key}: expected comma-separated numbers, got {raw!r}", lineno) from exc
        elif key in ("initial_state", "pump_target"):
            kwargs[key] = _parse_state_spec(key, raw, lineno)
        else:
            kwargs[key] = raw.lower() if key in ("mode", "sweep_mode") else raw

    if mode_override is not None:
        stated = kwargs.get("mode")
        if stated is not None and stated != mode_override:
            raise ConfigError(
                f"config sets mode = {stated!r} but the command runs {mode_override!r}",
                lines.get("mode"),
            )
        kwargs["mode"] = mode_override

    config = EngineConfig(**kwargs)
    config = replace(
        config,
        initial_state=_resolve_gaussian(config.initial_state, config.omega_h, config.t_h),
        pump_target=_resolve_gaussian(config.pump_target, config.omega_h, config.t_h),
    )
    return config.validate()


def load_config(path, mode_override=None):
    with open(path, encoding="utf-8") as handle:
        return parse_config(handle.read(), mode_override=mode_override)
