"""Boson modes, zero-mode words and the contraction calculus for exchange relations."""
