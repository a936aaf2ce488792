"""Build script: compiles the optional Cython fast path.

The package is fully functional without the extension (a pure Python
backend is selected at import time), so the build degrades gracefully
when Cython or a C compiler is unavailable.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hebound._core",
                ["src/hebound/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    ext_modules = []

setup(ext_modules=ext_modules)
