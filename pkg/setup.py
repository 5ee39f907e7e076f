from setuptools import setup
from setuptools.extension import Extension

from Cython.Build import cythonize
import numpy

extensions = [
    Extension(
        "uavcover.kernels._native",
        ["src/uavcover/kernels/_native.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"],
    ),
]

setup(ext_modules=cythonize(extensions, language_level=3))
