"""twistbench: exact desk-scale computations around automorphisms of
right-angled Artin groups and free products.

Subpackages by theme:

- :mod:`twistbench.graphs`    defining graphs, links/stars/joins
- :mod:`twistbench.words`     shuffle-reduced normal forms, length functionals
- :mod:`twistbench.autos`     automorphisms, Dehn twists, taxonomy
- :mod:`twistbench.products`  virtual-product combinatorics and hierarchies
- :mod:`twistbench.lattices`  integer lattices, Smith/Hermite forms
- :mod:`twistbench.cosets`    coset enumeration, elementary-power indices
- :mod:`twistbench.freeprod`  free products, shortening driver
- :mod:`twistbench.cli`       batch front end

The hot kernels (word normalization, displacement ball search, coset
enumeration) run compiled when the ``twistbench._speedups`` extension is
built; ``twistbench.kernel.IMPL_NAME`` reports which implementation is
active and ``TWISTBENCH_PURE=1`` forces the pure-Python one.
"""

from .kernel import IMPL_NAME

__version__ = "0.1.0"

__all__ = ["IMPL_NAME", "__version__"]
