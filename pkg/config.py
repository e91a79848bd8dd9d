from pydantic_settings import BaseSettings
from typing import Dict, Optional
from dotenv import load_dotenv

load_dotenv()

# UCI ENB2012 headers for the seven features and the two targets
DEFAULT_ENERGY_COLUMNS = {
    "relative_compactness": "X1",
    "surface_area": "X2",
    "wall_area": "X3",
    "roof_area": "X4",
    "overall_height": "X5",
    "orientation": "X6",
    "glazing_area": "X7",
    "heating_load": "Y1",
    "cooling_load": "Y2",
}


class Settings(BaseSettings):
    # Logging Configuration
    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Output Configuration
    output_dir: str = "results"
    seed: int = 0

    # Solver Configuration
    solver_tolerance: float = 1e-10
    solver_method: Optional[str] = None
    dense_solve_limit: int = 400
    global_direct_limit: int = 4000
    workers: int = 1

    # Energy Dataset Configuration
    energy_dataset_path: Optional[str] = None
    energy_column_map: Dict[str, str] = DEFAULT_ENERGY_COLUMNS

    class Config:
        env_file = ".env"
        env_file_encoding = "utf-8"
        extra = "allow"

    def energy_columns(self, overrides: Optional[Dict[str, str]] = None) -> Dict[str, str]:
        """
        Resolve the energy dataset column mapping.
        Overrides only replace the keys they name.
        """
        columns = dict(self.energy_column_map)
        if overrides:
            columns.update(overrides)
        return columns


settings = Settings()
