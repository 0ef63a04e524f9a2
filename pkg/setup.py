"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a pure-Python fallback is selected
at import time), so a failed compile only costs speed.
"""

import sys

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "pacx.kernels._fastcore",
                sources=["src/pacx/kernels/_fastcore.pyx"],
                include_dirs=[numpy.get_include()],
                language="c++",
                extra_compile_args=["-O3", "-std=c++11"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    sys.stderr.write(f"pacx: skipping compiled kernels ({exc}); "
                     "pure-Python fallback will be used\n")

setup(ext_modules=ext_modules)
