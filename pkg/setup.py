"""Build the optional Cython kernel for exact rational matrix arithmetic.

The package works without the extension (a pure-Python twin is selected at
import time), so a missing compiler only costs speed.
"""

from setuptools import setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        ["src/heckewb/kernels/_ckernels.pyx"],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
