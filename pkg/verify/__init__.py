"""Statistical and exhaustive oracles for the generators."""
