"""
EntangleOps Test Suite

Tests for the EntangleOps measures, bases and criteria.
"""
