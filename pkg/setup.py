"""Build script: compiles the optional DBM kernel extension.

The package works without the extension (lzg.dbm falls back to the
numpy kernel); the build is therefore best-effort.
"""

import sys

from setuptools import Extension, setup


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        print("lzg: Cython not available, building without the native kernel", file=sys.stderr)
        return []
    return cythonize(
        [Extension("lzg._core", ["src/lzg/_core.pyx"])],
        language_level=3,
    )


setup(ext_modules=extensions())
