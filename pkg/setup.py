"""Build script: compiles the optional native kernel extension.

The package works without the extension (numpy fallback); any failure to
cythonize or compile downgrades to a pure-python install instead of aborting.
"""

from setuptools import Extension, setup


def native_extensions():
    try:
        import numpy
        from Cython.Build import cythonize
    except ImportError:
        return []
    ext = Extension(
        "avcsym._kernels._native",
        ["src/avcsym/_kernels/_native.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        # -ffp-contract=off: keep multiply/subtract as two roundings so the
        # compiled pivot arithmetic matches the numpy fallback bitwise.
        extra_compile_args=["-O3", "-ffp-contract=off"],
    )
    try:
        return cythonize([ext], language_level=3)
    except Exception:
        return []


setup(ext_modules=native_extensions())
