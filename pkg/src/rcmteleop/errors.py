"""Exception types raised across the library."""


class DegenerateShaftError(ValueError):
    """Instrument and end-effector points are too close to define a shaft."""


class FaultError(RuntimeError):
    """Non-recoverable control fault (e.g. non-finite commanded velocity)."""


class ConfigError(ValueError):
    """Invalid or inconsistent experiment configuration."""


class NotEngagedError(RuntimeError):
    """Teleoperation clutch operation requested while disengaged."""
