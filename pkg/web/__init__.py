"""Read-only JSON query service for terragrid."""
