"""Link-level simulation of turbo-coded 3x3 MIMO-OFDM over MV underground power cables."""

__version__ = "0.1.0"
