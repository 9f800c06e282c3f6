"""IO helpers (settings, specification loaders, report writers)."""
