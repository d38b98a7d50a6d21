"""Build the optional compiled trial kernel; the package works without it."""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("COOPNOMA_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "coopnoma.kernels._trials",
                    ["src/coopnoma/kernels/_trials.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)
