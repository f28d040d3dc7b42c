"""cner: Spanish named-entity recognition and relation extraction toolkit."""

__version__ = "0.1.0"
