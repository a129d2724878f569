"""Build hook: compiles the optional C kernel extension.

The package works without the extension (a numpy/pure-python fallback is
selected at import time); the build is marked optional so installation
succeeds on toolchain-less machines.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "neqsolve._ckernels",
                ["src/neqsolve/_ckernels.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
