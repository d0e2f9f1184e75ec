"""Exact descendent Gromov-Witten invariants of orbifold projective lines."""
