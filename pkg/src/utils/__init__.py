"""
Configuration and CSV output.
"""
