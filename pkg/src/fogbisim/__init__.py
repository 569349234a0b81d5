"""Bisimulation games for first-order grammars."""
