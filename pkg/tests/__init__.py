"""
Test package for the vertex-nomination toolkit.
"""
