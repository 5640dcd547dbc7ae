"""tvlab: exact 3-manifold invariants from spherical fusion category data.

Library layout:

- ``scalars``    exact arithmetic in Q and quadratic extensions
- ``category``   fusion category data (Vec_G, Fibonacci, Rep(S3) fusion rules)
- ``graphcalc``  evaluation of colored graphs on the 2-sphere
- ``statesum``   triangulations, skeleta, and Turaev-Viro state sums
- ``groupoid``   finite groupoids, fibrant spans, linearization
- ``dwengine``   Dijkgraaf-Witten invariants and defect scenes
- ``locality``   boundary moves (pocket/tunnel/tube-capping) and link invariants
- ``cli``        the ``tvlab`` command line tool
"""

__version__ = "0.1.0"
