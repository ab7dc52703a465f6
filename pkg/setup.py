import os

from setuptools import setup

ext_modules = []
if not os.environ.get("SMIWARP_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        print("Cython/numpy unavailable at build time; installing pure-Python DP only")
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "smiwarp._dp._fast",
                    ["src/smiwarp/_dp/_fast.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
