"""
Configuration management for the graded polynomial identity toolkit
"""
import os
from typing import List
from pydantic import BaseModel, Field
from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_flag(name: str) -> bool:
    return os.getenv(name, '0').strip().lower() in ('1', 'true', 'yes', 'on')


class FieldConfig(BaseModel):
    """Base field Q(zeta_m)"""
    conductor: int = Field(default_factory=lambda: int(os.getenv('GRADEDPI_CONDUCTOR', '1')))


class GrassmannConfig(BaseModel):
    """Finite truncation of the Grassmann algebra"""
    budget: int = Field(default_factory=lambda: int(os.getenv('GRADEDPI_BUDGET', '6')))
    max_budget: int = 62  # generator subsets are machine-word bitmasks


class ScanConfig(BaseModel):
    """Enumeration test for the primeness property"""
    maxdeg: int = Field(default_factory=lambda: int(os.getenv('GRADEDPI_MAXDEG', '2')))
    coefficients: List[str] = ["1", "-1"]
    max_variables: int = 2  # per factor


class ArchiveConfig(BaseModel):
    """Report archive (sqlite)"""
    enabled: bool = Field(default_factory=lambda: _env_flag('GRADEDPI_ARCHIVE'))
    path: str = Field(default_factory=lambda: os.getenv('GRADEDPI_ARCHIVE_PATH', 'data/reports.db'))
    enable_wal: bool = True


class AppConfig(BaseModel):
    """Main application configuration"""
    field: FieldConfig
    grassmann: GrassmannConfig
    scan: ScanConfig
    archive: ArchiveConfig

    max_conductor: int = 64
    max_group_order: int = 64
    max_matrix_size: int = 8  # |S_n| enumeration for the automorphism subgroup
    seed: int = Field(default_factory=lambda: int(os.getenv('GRADEDPI_SEED', '2024')))
    log_level: str = Field(default_factory=lambda: os.getenv('GRADEDPI_LOG_LEVEL', 'WARNING'))


# Global config instance
config = AppConfig(
    field=FieldConfig(),
    grassmann=GrassmannConfig(),
    scan=ScanConfig(),
    archive=ArchiveConfig()
)


def validate_config(cfg: AppConfig = None) -> bool:
    """Validate configuration"""
    cfg = cfg or config
    if not 1 <= cfg.field.conductor <= cfg.max_conductor:
        print(f"Error: conductor must lie in 1..{cfg.max_conductor}, got {cfg.field.conductor}")
        return False
    if not 0 <= cfg.grassmann.budget <= cfg.grassmann.max_budget:
        print(f"Error: Grassmann budget must lie in 0..{cfg.grassmann.max_budget}, got {cfg.grassmann.budget}")
        return False
    if not 1 <= cfg.scan.maxdeg <= 3:
        print(f"Error: maxdeg must lie in 1..3, got {cfg.scan.maxdeg}")
        return False
    return True
