"""Dynamic-oracle supervision over flat integer token-id arrays."""

from ._core import oracle_next_batch, version_info

__all__ = ["oracle_next_batch", "version_info"]
