"""Build script for the optional compiled orbit kernel.

The extension is marked optional: when Cython or a C compiler is missing the
package installs without it and falls back to ``symstab._kernels_py``.
"""
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "symstab._kernels",
                ["src/symstab/_kernels.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3", "boundscheck": False, "wraparound": False},
    )

setup(ext_modules=ext_modules)
