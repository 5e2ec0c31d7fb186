"""Identity-check engine tests."""
