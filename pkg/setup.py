"""Build script. The Cython kernel is optional: if it cannot be built the
package installs with the pure NumPy fallback and identical behavior."""
import sys

from setuptools import setup, Extension

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy

    ext_modules = cythonize(
        [
            Extension(
                "cuecrit._aberth_cy",
                ["src/cuecrit/_aberth_cy.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-environment dependent
    print(f"cuecrit: skipping compiled kernel ({exc}); using pure-Python fallback",
          file=sys.stderr)

setup(ext_modules=ext_modules)
