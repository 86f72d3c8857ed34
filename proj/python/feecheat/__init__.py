"""Mixed finite element solver for the Hodge heat equation.

Thin python surface over the C++ core: named example domains, transient
convergence studies, and the structure-preservation property suite.
"""

try:
    from ._feecheat import (
        check_properties,
        convergence,
        harmonic_dimension,
        mesh_info,
        run_single,
    )
except ImportError:  # development tree: the module sits on PYTHONPATH unpackaged
    from _feecheat import (
        check_properties,
        convergence,
        harmonic_dimension,
        mesh_info,
        run_single,
    )

__all__ = [
    "check_properties",
    "convergence",
    "harmonic_dimension",
    "mesh_info",
    "run_single",
]

__version__ = "0.1.0"
