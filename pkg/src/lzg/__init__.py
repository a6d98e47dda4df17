"""Reachability for networks of timed automata via local-time zone graphs.

Subpackages:

- ``lzg.dbm``     difference bound matrices (compiled kernel + fallback)
- ``lzg.zones``   offset zones: local, global and plain clock views
- ``lzg.model``   input language, networks, guards, max constants
- ``lzg.explore`` breadth-first zone-graph engines and DOT export
- ``lzg.oracle``  exact rational-run semantics and cross-checks
- ``lzg.bench``   benchmark model generators and the suite runner
- ``lzg.cli``     command-line entry point
"""

__version__ = "0.1.0"

from .dbm import NATIVE_KERNEL

__all__ = ["NATIVE_KERNEL", "__version__"]
