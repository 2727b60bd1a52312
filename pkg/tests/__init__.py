"""Tests for squaregroups."""
