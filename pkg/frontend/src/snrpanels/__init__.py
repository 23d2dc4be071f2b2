"""Recovery-SNR panel rendering for benchmark aggregate CSVs."""

__version__ = "0.1.0"

from .render import PanelInfo, SchemaError, read_aggregate, render
