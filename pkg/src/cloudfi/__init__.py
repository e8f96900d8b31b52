"""cloudfi: fault injection campaigns against a miniature cloud control plane."""

__version__ = "0.1.0"
