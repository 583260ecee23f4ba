"""Collaborative Tagging Simulator - Core"""
