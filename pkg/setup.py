import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pure-Python install; kernels fall back at import
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "cardiohybrid.kernels._native",
                ["src/cardiohybrid/kernels/_native.pyx"],
                include_dirs=[np.get_include()],
                # no fused multiply-add, so results match the numpy fallback exactly
                extra_compile_args=["-O3", "-ffp-contract=off"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
