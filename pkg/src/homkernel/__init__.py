"""Graded commutative-algebra kernel: Groebner bases, resolutions, Tor/Ext and module predicates."""
