"""hire-topk: high-recall approximate top-k estimation for linear scorers."""

__version__ = "0.1.0"
