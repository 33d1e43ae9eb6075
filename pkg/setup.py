import os

import numpy as np
from Cython.Build import cythonize
from setuptools import Extension, setup

# -ffast-math is deliberately absent: the kernel relies on compensated sums
openmp = [] if os.environ.get("XLIRS_NO_OPENMP") else ["-fopenmp"]

extensions = [
    Extension(
        "xlirs._kernels",
        ["src/xlirs/_kernels.pyx"],
        include_dirs=[np.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=["-O3"] + openmp,
        extra_link_args=openmp,
    )
]

setup(
    ext_modules=cythonize(
        extensions,
        compiler_directives={"language_level": "3"},
    )
)
