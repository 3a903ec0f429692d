"""Build glue for the optional compiled kernels.

The package is fully functional without the extension; conelab._backend
falls back to the pure-Python kernels when the import fails.
"""

import sys

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "conelab._kernels",
                ["src/conelab/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # missing Cython or compiler: ship pure Python
    print(f"conelab: skipping compiled kernels ({exc})", file=sys.stderr)

setup(ext_modules=ext_modules)
