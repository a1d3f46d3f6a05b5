"""Masked-LM embedding extraction into RDCB dumps."""

from .extract import ExtractorConfig, TokenizationMismatch, extract, vocab_export
from .formats import DumpWriter, ManifestEntry, read_manifest

__version__ = "0.1.0"

__all__ = ["DumpWriter", "ExtractorConfig", "ManifestEntry", "TokenizationMismatch",
           "extract", "read_manifest", "vocab_export"]
