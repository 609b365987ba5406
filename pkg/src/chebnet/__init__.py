"""Curve nets on surfaces: second-order invariants, Chebyshev nets and the
correspondence between concordant Chebyshev nets and pairs of pseudospherical
surfaces."""

__version__ = "0.1.0"
