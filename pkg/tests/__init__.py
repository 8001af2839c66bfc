"""Tests for weak-wreath."""
