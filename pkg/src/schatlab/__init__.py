"""Schatten-class diagnostics for integral operators on tori and on SU(2)/SO(3).

Submodules are imported lazily so that the command line entry point can
configure threading environment variables before numpy is first loaded.
"""

__version__ = "0.1.0"

_SUBMODULES = (
    "torus_fourier",
    "kernels",
    "sobolev",
    "spectral",
    "diag_avg",
    "powers",
    "su2",
    "figures",
    "cli",
)


def __getattr__(name):
    if name in _SUBMODULES:
        import importlib

        module = importlib.import_module(f".{name}", __name__)
        globals()[name] = module
        return module
    raise AttributeError(f"module {__name__!r} has no attribute {name!r}")


def __dir__():
    return sorted(list(globals()) + list(_SUBMODULES))
