"""
CLI commands, built-in domains and self-test.
"""
