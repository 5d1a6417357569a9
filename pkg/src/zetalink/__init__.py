"""zetalink: exact tools for cyclotomic invariants of plane curve families.

Subpackages and modules:

- cyclotomic: exact arithmetic in Q(zeta_N), roots of unity, strata counts
- mpoly: sparse homogeneous trivariate polynomials, Newton polygons, binary forms
- curves: curve family constructions and verifiers
- holonomy: linking invariant of triangle cycles in cyclic branched covers
- groups: finitely presented group engine (coset enumeration, rewriting, SNF)
- certificates, cli: reproducible JSON certificates and the command line tool
"""

__version__ = "0.1.0"
