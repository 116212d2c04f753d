"""Tests for the fracwave package."""
