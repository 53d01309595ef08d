"""
Test Suite
"""
