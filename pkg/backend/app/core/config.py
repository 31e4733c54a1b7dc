"""
Toolkit Configuration
=====================
Uses Pydantic Settings with nested sections.

Sources, highest priority first:
- CLI flag overrides (passed to load_settings)
- Environment variables: BLIMP_ prefix, __ between nested names
  (e.g. BLIMP_EVOLUTION__POP_SIZE=20)
- .env file
- TOML config file ([plant], [radar], [episode], [evolution],
  [controller.pid], [controller.ann], [controller.snn], [harness])
- Field defaults
"""

from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Tuple, Type, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

from control.controllers import ControlLimits, PidMode, PidParams
from control.controllers.base import DEFAULT_U_MAX
from control.controllers.genome import ParameterKind
from control.evolution import EpisodeSet, EvolutionConfig
from control.plant import PlantModel, RadarModel
from control.plant.blimp_model import DEFAULT_DT, FITTED_DEN, FITTED_NUM
from control.plant.radar import DEFAULT_NOISE_SIGMA

from .exceptions import ConfigurationError


class Section(BaseModel):
    """Config sections reject unknown keys so typos surface as usage errors."""
    model_config = ConfigDict(extra="forbid")


class PlantSettings(Section):
    num: Tuple[float, float] = FITTED_NUM
    den: Tuple[float, float] = FITTED_DEN
    dt: float = Field(DEFAULT_DT, gt=0)

    def to_model(self) -> PlantModel:
        return PlantModel(num=self.num, den=self.den, dt=self.dt)


class RadarSettings(Section):
    noise_sigma: float = Field(DEFAULT_NOISE_SIGMA, ge=0)
    quantization: float = Field(0.0, ge=0)
    median_window: int = Field(1, ge=1)
    avg_window: int = Field(1, ge=1)

    @field_validator("median_window")
    @classmethod
    def median_window_odd(cls, v: int) -> int:
        if v % 2 == 0:
            raise ValueError("median_window must be odd")
        return v

    def to_model(self) -> RadarModel:
        return RadarModel(
            noise_sigma=self.noise_sigma,
            quantization=self.quantization,
            median_window=self.median_window,
            avg_window=self.avg_window,
        )


class EpisodeSettings(Section):
    n_setpoints: int = Field(10, ge=1)
    setpoint_min: float = 0.0
    setpoint_max: float = 3.0
    hold_s: float = Field(15.0, gt=0)
    h0: float = 0.0

    @model_validator(mode="after")
    def range_ordered(self) -> "EpisodeSettings":
        if self.setpoint_min > self.setpoint_max:
            raise ValueError("setpoint_min must not exceed setpoint_max")
        return self


class MutationSettings(Section):
    """Half-width of the uniform additive mutation per parameter class."""
    weight: float = Field(2.5, ge=0)
    bias: float = Field(2.5, ge=0)
    threshold: float = Field(0.5, ge=0)
    scale: float = Field(1.0, ge=0)
    decay: float = Field(0.5, ge=0)

    def to_ranges(self) -> Dict[ParameterKind, float]:
        return {kind: getattr(self, kind.value) for kind in ParameterKind}


class EvolutionSettings(Section):
    controller: Literal["snn", "ann"] = "snn"
    pop_size: int = Field(100, ge=1)
    tournament_size: int = Field(3, ge=1)
    p_mut_individual: float = Field(0.4, ge=0, le=1)
    p_mut_param: float = Field(0.6, ge=0, le=1)
    n_generations: int = Field(300, ge=0)
    hof_size: int = Field(5, ge=1)
    reeval_sets: int = Field(5, ge=1)
    workers: int = Field(1, ge=0, description="Fitness worker processes; 0 = physical cores, 1 = in-process")
    checkpoint_every: int = Field(1, ge=1)
    mutation: MutationSettings = MutationSettings()

    @model_validator(mode="after")
    def tournament_fits_population(self) -> "EvolutionSettings":
        if self.tournament_size > self.pop_size:
            raise ValueError(
                f"tournament_size ({self.tournament_size}) must not exceed pop_size ({self.pop_size})"
            )
        return self


class PidSettings(Section):
    kp: float = 6.0
    ki: float = 0.4
    kd: float = 0.9
    mode: PidMode = PidMode.LITERAL


class NetworkSettings(Section):
    """Evolved controller plus its optional parallel PD."""
    genome: Optional[str] = None
    pd_enabled: bool = False
    pd_kp: float = 0.0
    pd_kd: float = 0.0


# Hybrid PD gains per network kind
class AnnNetworkSettings(NetworkSettings):
    pd_kp: float = 1.3
    pd_kd: float = 0.4


class SnnNetworkSettings(NetworkSettings):
    pd_kp: float = 1.4
    pd_kd: float = 0.3


class ControllerSettings(Section):
    u_max: float = Field(DEFAULT_U_MAX, gt=0)
    pid: PidSettings = PidSettings()
    ann: AnnNetworkSettings = AnnNetworkSettings()
    snn: SnnNetworkSettings = SnnNetworkSettings()


class HarnessSettings(Section):
    setpoints: List[float] = Field(default_factory=lambda: [3.0, 2.0, 1.0, 2.5, 1.5])
    hold_s: List[float] = Field(default_factory=lambda: [60.0])
    h0: float = 0.0
    smoothing_window: int = Field(10, ge=1)
    output_dir: str = "results"
    log_duration_s: float = Field(300.0, gt=0)
    log_noise_sigma: float = Field(0.0, ge=0)

    @field_validator("setpoints")
    @classmethod
    def setpoints_valid(cls, v: List[float]) -> List[float]:
        if not v or any(s < 0 for s in v):
            raise ValueError("setpoints must be a non-empty list of values >= 0")
        return v

    @field_validator("hold_s")
    @classmethod
    def holds_positive(cls, v: List[float]) -> List[float]:
        if not v or any(h <= 0 for h in v):
            raise ValueError("hold_s must be a non-empty list of values > 0")
        return v

    @model_validator(mode="after")
    def holds_match(self) -> "HarnessSettings":
        if len(self.hold_s) not in (1, len(self.setpoints)):
            raise ValueError("hold_s needs one value or one per setpoint")
        return self

    def holds(self) -> List[float]:
        return self.hold_s * len(self.setpoints) if len(self.hold_s) == 1 else list(self.hold_s)


class Settings(BaseSettings):
    """Toolkit settings"""

    seed: int = Field(0, ge=0)
    log_level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    log_format: Literal["console", "json"] = "console"
    log_file: Optional[str] = None

    plant: PlantSettings = PlantSettings()
    radar: RadarSettings = RadarSettings()
    episode: EpisodeSettings = EpisodeSettings()
    evolution: EvolutionSettings = EvolutionSettings()
    controller: ControllerSettings = ControllerSettings()
    harness: HarnessSettings = HarnessSettings()

    model_config = SettingsConfigDict(
        env_prefix="BLIMP_",
        env_nested_delimiter="__",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="forbid",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: Type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,
    ) -> Tuple[PydanticBaseSettingsSource, ...]:
        return (init_settings, env_settings, dotenv_settings, TomlConfigSettingsSource(settings_cls))

    # Conversions into the immutable core types

    def plant_model(self) -> PlantModel:
        return self.plant.to_model()

    def radar_model(self) -> RadarModel:
        return self.radar.to_model()

    def control_limits(self) -> ControlLimits:
        return ControlLimits(u_max=self.controller.u_max)

    def pid_params(self) -> PidParams:
        pid = self.controller.pid
        return PidParams(kp=pid.kp, ki=pid.ki, kd=pid.kd, T=self.plant.dt, mode=pid.mode)

    def network_settings(self, kind: str) -> NetworkSettings:
        return getattr(self.controller, kind)

    def pd_params(self, kind: str) -> Optional[PidParams]:
        """Parallel PD for a network controller, None when disabled."""
        net = self.network_settings(kind)
        return PidParams.pd(net.pd_kp, net.pd_kd, T=self.plant.dt) if net.pd_enabled else None

    def episode_set(self) -> EpisodeSet:
        ep = self.episode
        return EpisodeSet(
            n_setpoints=ep.n_setpoints,
            setpoint_range=(ep.setpoint_min, ep.setpoint_max),
            hold_s=ep.hold_s,
            dt=self.plant.dt,
            h0=ep.h0,
        )

    def evolution_config(self) -> EvolutionConfig:
        evo = self.evolution
        return EvolutionConfig(
            pop_size=evo.pop_size,
            tournament_size=evo.tournament_size,
            p_mut_individual=evo.p_mut_individual,
            p_mut_param=evo.p_mut_param,
            n_generations=evo.n_generations,
            hof_size=evo.hof_size,
            reeval_sets=evo.reeval_sets,
            genome_kind=evo.controller,
            seed=self.seed,
            mutation_ranges=evo.mutation.to_ranges(),
            episode_set=self.episode_set(),
        )


def _with_toml_file(config_file: Optional[Path]) -> Type[Settings]:
    if config_file is None:
        return Settings

    class FileSettings(Settings):
        model_config = SettingsConfigDict(**{**Settings.model_config, "toml_file": config_file})

    return FileSettings


def load_settings(
    config_file: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None
) -> Settings:
    """
    Build validated settings.

    Args:
        config_file: TOML file, None for defaults + environment only
        overrides: Nested dict of values taking precedence over every source

    Returns:
        Settings instance

    Raises:
        ConfigurationError: missing or unparsable file, invalid values
    """
    path = Path(config_file) if config_file is not None else None
    if path is not None and not path.is_file():
        raise ConfigurationError(f"Config file '{path}' not found", details={"path": str(path)})

    settings_cls = _with_toml_file(path)
    try:
        settings = settings_cls(**(overrides or {}))
    except ValidationError as e:
        problems = [
            f"{'.'.join(str(p) for p in err['loc'])}: {err['msg']}"
            for err in e.errors()
        ]
        raise ConfigurationError(f"Invalid configuration: {'; '.join(problems)}", details={"errors": problems}) from e
    except ValueError as e:
        # tomllib.TOMLDecodeError is a ValueError
        raise ConfigurationError(f"Cannot parse config file '{path}': {e}", details={"path": str(path)}) from e

    return settings
