"""Ground truth by exhaustive computation."""
