"""Exception types raised by the package."""


class EmbeddingNotPSD(ArithmeticError):
    """Circulant embedding of the increment covariance has a negative eigenvalue."""


class ConfigError(ValueError):
    """Invalid campaign or study configuration."""
