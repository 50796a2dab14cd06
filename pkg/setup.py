"""Optionally compiles the hot modules (plain Python, built as-is) and the
invariant scanner with Cython.  Without Cython the package runs as pure
Python, several times slower."""

from setuptools import setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize([
        "src/spinevm/spine.py",  # layout declared in spine.pxd
        "src/spinevm/fold.py",
        "src/spinevm/wind.py",
        "src/spinevm/eval.py",
        "src/spinevm/prim.py",
        "src/spinevm/_scan.pyx",
    ], language_level=3, quiet=True)

setup(ext_modules=ext_modules)
