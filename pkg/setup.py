"""Build script for the optional compiled Gibbs-sampling kernel.

The package works without the extension (a pure-Python kernel is selected at
import time); compilation failures therefore do not abort installation.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize

    ext = Extension(
        "portrait_engine.kernels._gibbs",
        sources=["src/portrait_engine/kernels/_gibbs.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
        optional=True,
    )
    ext_modules = cythonize([ext], compiler_directives={"language_level": "3"})
except ImportError:
    pass

setup(ext_modules=ext_modules)
