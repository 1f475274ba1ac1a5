"""Build script for the optional compiled propagation kernel.

The package is pure Python except for one hot loop: the fixed-substep RK4
propagator in ``nads._kernels``. If Cython or a C compiler is unavailable
the build falls through and the pure-Python kernel is used at import time.
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
                "nads._kernels._rk4_cy",
                ["src/nads/_kernels/_rk4_cy.pyx"],
                extra_compile_args=["-O3"],
                optional=True,
            )
        ],
        language_level=3,
        compiler_directives={
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )

setup(ext_modules=ext_modules)
