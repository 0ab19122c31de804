"""Build script for the optional compiled matcher kernel.

The package is pure Python except for semgrex._kernel._ckernel, a Cython
extension that accelerates the per-candidate relation checks at the heart
of pattern matching.  The extension is optional: if Cython or a C compiler
is unavailable the build continues and the pure-Python kernel is used.
"""

from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "semgrex._kernel._ckernel",
                ["src/semgrex/_kernel/_ckernel.pyx"],
                optional=True,
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
