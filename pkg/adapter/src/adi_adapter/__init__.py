"""Model-to-exchange-format adapter for disaster scene perception."""

__version__ = "0.1.0"

from .config import AdapterConfig, load_adapter_config
from .export import infer_and_export, validate_export
from .stub import load_model

__all__ = [
    "AdapterConfig",
    "infer_and_export",
    "load_adapter_config",
    "load_model",
    "validate_export",
]
