from typing import Literal, Optional
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings


class LoggingSettings(BaseModel):
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    console_enabled: bool = True
    file_enabled: bool = True
    json_format: bool = True
    logs_dir: str = "logs"


class OutputSettings(BaseModel):
    root: str = "runs"


class Settings(BaseSettings):
    """Process-level settings.

    Only logging and the output root come from the environment
    (``CWT_OUTPUT__ROOT=/scratch/runs``); everything that changes numbers or
    bytes lives in the scenario YAML or is fixed in code, so the manifest
    fully describes a run. Sweep workers are a command-line flag.
    """

    logging: LoggingSettings = Field(default_factory=LoggingSettings)
    output: OutputSettings = Field(default_factory=OutputSettings)

    class Config:
        env_file = ".env"
        env_prefix = "CWT_"
        env_nested_delimiter = "__"


_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings()
    return _settings
