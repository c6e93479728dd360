"""Build script: compiles the Monte-Carlo kernels when Cython is available.

The package is fully functional without the extension (the numpy fallback
is selected at import); a plain `pip install .` on a toolchain-less host
therefore still works.
"""

from setuptools import Extension, setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        [
            Extension(
                "hybridcell._kernels",
                ["src/hybridcell/_kernels.pyx"],
                # keep mul/add separate so results match the numpy fallback
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
