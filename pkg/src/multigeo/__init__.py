"""Rectangle-tiled surfaces, their Fuchsian groups, genus-one invariants and curve equations."""
__version__ = "0.1.0"

__all__ = [
    "hyperbolic_core",
    "equiquadrangle",
    "tiling",
    "fuchsian",
    "elliptic_invariants",
    "module_solver",
    "curve_families",
    "fenchel_nielsen",
    "cli",
]
