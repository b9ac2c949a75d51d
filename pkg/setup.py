"""Build script: compiles the optional aggregation kernel extension.

The extension is marked optional -- a failed compile (no C toolchain, no
Cython) still produces a working install that falls back to the pure
implementation in vulnex._kernels.pure.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    extensions = [
        Extension(
            "vulnex._kernels._native",
            ["src/vulnex/_kernels/_native.pyx"],
            extra_compile_args=["-O3"],
            optional=True,
        )
    ]
    ext_modules = cythonize(extensions, compiler_directives={"language_level": "3"})

setup(ext_modules=ext_modules)
