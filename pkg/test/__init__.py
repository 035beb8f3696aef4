"""Unit test package for grouptest."""
