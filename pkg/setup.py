"""Build script: compiles the optional speedup extension.

The package is fully functional without the extension (a pure-Python
kernel is selected at import time), so any build failure here downgrades
to a pure-Python install instead of aborting.
"""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "twistbench._speedups",
                ["src/twistbench/_speedups.pyx"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - environment without Cython
    print(f"twistbench: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)
