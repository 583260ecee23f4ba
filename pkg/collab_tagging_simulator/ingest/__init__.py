"""Collaborative Tagging Simulator - Log ingestion, fixtures and reports"""
