"""Build script for the optional compiled kernel extension.

The package is pure Python plus one Cython extension holding the hot GCNN
layer kernels. The extension is marked optional: if Cython or a C compiler
is missing, the install still succeeds and the package falls back to the
numpy implementation at import time.
"""

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext = Extension(
        "graphdiff._ckernels",
        sources=["src/graphdiff/_ckernels.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
    )
    ext.optional = True
    ext_modules = cythonize([ext], language_level="3")
except ImportError:
    pass

setup(ext_modules=ext_modules)
