"""Outage analysis and Monte Carlo simulation of cooperative SWIPT-NOMA downlinks."""

__version__ = "0.1.0"
