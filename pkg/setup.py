"""Build script for the optional compiled kernel extension.

The package is fully functional without the extension: chebshock._kernels
falls back to the numpy implementation when the compiled module is missing.
"""

from setuptools import Extension, setup

try:
    import numpy
    from Cython.Build import cythonize

    extensions = cythonize(
        [
            Extension(
                "chebshock._kernels._chebcore",
                ["src/chebshock/_kernels/_chebcore.pyx"],
                include_dirs=[numpy.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except ImportError:
    extensions = []

setup(ext_modules=extensions)
