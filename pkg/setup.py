import numpy
from setuptools import Extension, setup
from Cython.Build import cythonize

# The compiled kernel is optional at runtime (floqfric.kernels falls back to
# the numpy reference implementation), but we always try to build it.
ext_modules = cythonize(
    [
        Extension(
            "floqfric.kernels._core",
            ["src/floqfric/kernels/_core.pyx"],
            include_dirs=[numpy.get_include()],
            define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            extra_compile_args=["-O3"],
        )
    ],
    language_level="3",
)

setup(ext_modules=ext_modules)
