from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [
            Extension(
                "pachange._kernels._speed",
                ["src/pachange/_kernels/_speed.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
)
