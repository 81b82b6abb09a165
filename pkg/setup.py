"""Build script for the optional Cython Numerov kernel.

The package works without the extension; ``pdmosc.kernels`` falls back to the
pure-Python loops when ``pdmosc._numerov`` cannot be imported.
"""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("PDMOSC_NO_EXT"):
    try:
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "pdmosc._numerov",
                    ["src/pdmosc/_numerov.pyx"],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={
                "language_level": "3",
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
            },
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
