from pydantic_settings import BaseSettings


class Settings(BaseSettings):
    # Exhaustive search caps
    oracle_limit: int = 6
    psne_limit: int = 20
    brute_matching_limit: int = 12

    # CLI defaults
    jobs: int = 1
    paranoid: bool = False
    log_level: str = "INFO"

    # Random instance sampling
    default_seed: int = 0
    er_edge_probability: float = 0.5

    model_config = {"env_prefix": "BNPG_", "env_file": ".env", "env_file_encoding": "utf-8"}


settings = Settings()
