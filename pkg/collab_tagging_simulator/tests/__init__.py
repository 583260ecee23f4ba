"""Collaborative Tagging Simulator - Tests"""
