import os

from setuptools import setup

ext_modules = []
if os.environ.get("QUDITSIM_NO_EXT") != "1":
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "quditsim.kernels._core",
                    sources=["src/quditsim/kernels/_core.pyx"],
                    include_dirs=[np.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level="3",
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        # Cython/numpy missing at build time: install pure-Python only,
        # kernels fall back to the numpy implementations at import.
        ext_modules = []

setup(ext_modules=ext_modules)
