"""Desk-scale simulator for CV-QKD co-propagating with classical WDM channels over a turbulent FSO link."""

__version__ = "0.1.0"
