class PoleError(ZeroDivisionError):
    """A weight or scalar kernel was evaluated at a pole."""


class BudgetError(ValueError):
    """Requested dense object exceeds the configured size budget."""


class ConfigError(ValueError):
    """Invalid or incomplete suite configuration."""
