"""Publication-style figure rendering from welander CSV exports."""

from .cli import render
from .figures import RENDERERS
from .reader import Dataset, SchemaError, read_dataset

__all__ = ["Dataset", "RENDERERS", "SchemaError", "read_dataset", "render"]
__version__ = "1.0.0"
