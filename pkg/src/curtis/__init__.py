"""Exact-arithmetic coherent tuple rings over torus group algebras.

Desk-scale construction and verification of:

* the ring of coherent tuples over torus group algebras attached to
  ell-ramified characters of unramified maximal tori,
* its finite-group analogue built from the group rings of maximal tori of a
  finite general linear group,
* the moduli of matrix pairs (Fr, sigma) with Fr sigma Fr^-1 = sigma^q and the
  invariant-function map back into the coherent tuple ring.

Every structural claim is checked against an independent brute-force oracle.
"""

__version__ = "0.1.0"
