"""Collaborative Tagging Simulator - Tag stream simulation"""
