"""setbellman: interval set-based Bellman operators for cost-uncertain MDPs."""

__version__ = "0.1.0"
