"""Collaborative Tagging Simulator - tag stream dynamics, Polya urns and bookmark analytics"""

__version__ = "0.1.0"
