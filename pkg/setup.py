import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SKETCHSEARCH_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [
                Extension(
                    "sketchsearch.kernels._core",
                    ["src/sketchsearch/kernels/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                    extra_compile_args=["-O3"],
                )
            ],
            language_level=3,
        )
    except ImportError:
        # No Cython/numpy at build time: install pure-Python only, the
        # kernel selector falls back at import.
        ext_modules = []

setup(ext_modules=ext_modules)
