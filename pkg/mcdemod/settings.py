from os.path import dirname, join

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

import mcdemod

PROJECT_DIR = dirname(dirname(mcdemod.__file__))


class Settings(BaseSettings):
    output_dir: str = Field(
        default=join(PROJECT_DIR, "output"),
        description="Root for experiment outputs. For any other value set env variable 'MCDEMOD_OUTPUT_DIR'",
    )
    workers: int = Field(
        default=1,
        ge=1,
        description="Number of worker processes for Monte Carlo runs. 1 runs everything in-process.",
    )
    log_level: str = Field(
        default="INFO",
        description="Level for the `mcdemod` loggers, e.g. `MCDEMOD_LOG_LEVEL=DEBUG mcdemod ber ...`",
    )
    filter_dt: float = Field(
        default=0.1,
        gt=0,
        description="Uniform grid (s) on which filter paths are sampled and RMS curves are computed.",
    )
    quadrature_dt: float = Field(
        default=0.01,
        gt=0,
        description="Sampling step (s) of mean-field references; trapezoid quadrature runs on this grid.",
    )
    default_seed: int = Field(
        default=20190101,
        ge=0,
        description="Master seed used when a config file does not provide one.",
    )

    model_config = SettingsConfigDict(env_prefix="mcdemod_")
