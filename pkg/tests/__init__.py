"""Test suite for qvwp."""
