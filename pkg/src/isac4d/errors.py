"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration value."""


class SceneError(ValueError):
    """Malformed scene description (file parse or geometry)."""


class CapacityError(RuntimeError):
    """A requested simulation would exceed the configured memory cap."""
