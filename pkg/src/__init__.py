"""
mmWave Network Simulator - Main Application Package
"""
__version__ = "1.0.1"
