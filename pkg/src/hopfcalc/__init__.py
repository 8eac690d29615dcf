"""Exact verification toolkit for motivic Hopf-element relations.

Submodules: ``exact_poly`` and ``groebner`` (exact polynomial algebra),
``cayley_dickson`` (split composition algebras), ``mw_ring`` (the eta/rho
coefficient ring), ``hopf_calculus`` (sign calculus, derivations, finite
splitting), ``homotopy_verifier`` (polynomial homotopy certificates) and
``cli``.
"""

__version__ = "0.1.0"
