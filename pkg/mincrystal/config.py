"""Configuration settings."""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Library settings.

    None of these change a computed value; they tune oracle cross-checks,
    logging and iteration caps.
    """

    model_config = SettingsConfigDict(env_prefix="MINCRYSTAL_", env_file=".env")

    dp_verify_limit: int = 10_000  # Largest generator re-checked against the DP oracle
    default_precision: int = 8  # Witt precision N when the caller omits it
    log_level: str = "WARNING"
    max_lattice_steps: int = 64  # Cap on closure iterations


settings: Settings = Settings()
