import os

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    cythonize = None

ext_modules = []
if cythonize is not None and not os.environ.get("PUSHCUT_SKIP_EXT"):
    ext_modules = cythonize(
        [
            Extension(
                "pushcut._kernels",
                ["src/pushcut/_kernels.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
