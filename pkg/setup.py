"""Build script for the optional compiled kernel core.

Usage:
    pip install -e .                        # pure-Python kernels
    python setup.py build_ext --inplace     # compile the hot loops (needs Cython)

After building, verify with:
    python -c "from oupop._kernels import BACKEND; print(BACKEND)"   # -> 'core'

The package works without the extension; `oupop._kernels` falls back to the
pure NumPy/Python implementation at import time.  The compiled core is built
with -ffp-contract=off so both backends produce bit-identical doubles.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "oupop._kernels._core",
                ["src/oupop/_kernels/_core.pyx"],
                extra_compile_args=["-O2", "-ffp-contract=off"],
            )
        ],
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
            "language_level": "3",
        },
    )

setup(ext_modules=ext_modules)
