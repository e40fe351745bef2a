from pydantic_settings import BaseSettings, SettingsConfigDict
from pydantic import Field
from loguru import logger

class Settings(BaseSettings):
    """
    Pydantic based settings class for process-level defaults of the binning engine
    """
    model_config : SettingsConfigDict = SettingsConfigDict(
        env_prefix = "AUTO_BINNING_",
        env_file = ".env",
        env_file_encoding = "utf-8",
        extra = "ignore"
    )

    LOG_LEVEL : str = Field(
        default = "INFO", description = "Minimum level of the stderr log sink"
    )

    PROGRESS : bool = Field(
        default = False,
        description = "Show tqdm progress bars for path strands and comparison methods"
    )

    N_JOBS : int = Field(
        default = 1,
        ge = 1,
        description = "Number of joblib workers used for cross-validation fold fits"
    )

    OUTPUT_DIR : str = Field(
        default = "output",
        description = "Default directory for written artifacts"
    )


try:
    settings = Settings()
except Exception as e:
    logger.error(f"Error loading settings: {e}")
    raise SystemExit(e)
