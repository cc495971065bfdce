from pathlib import Path
from pydantic_settings import BaseSettings, SettingsConfigDict

class Settings(BaseSettings):
    """Configurações do ambiente de experimentos."""

    # --- Saída ---
    # Quando definido, sobrescreve o diretório de saída dos documentos de execução
    OUTPUT_DIR: Path | None = None

    # --- Logging ---
    LOG_LEVEL: str = "INFO"
    LOG_FORMAT: str = "%(asctime)s %(levelname)s %(name)s: %(message)s"

    # --- Execução ---
    WORKERS: int = 1  # processos usados pelo estudo de convergência

    # Refinamento M da malha de massa usada para discretizar soluções exatas
    EXACT_RESOLUTION: int = 20000

    # Lê do arquivo .env (variáveis VPS_*)
    model_config = SettingsConfigDict(env_file=".env", env_prefix="VPS_", extra="ignore")

settings = Settings()
