"""Config-driven experiment runner."""
