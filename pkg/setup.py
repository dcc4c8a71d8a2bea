"""Build the optional compiled kernel; the package falls back to pure Python
if the extension is unavailable."""

from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize

    ext_modules = cythonize(
        "src/fairctl/kernels/_speed.pyx",
        compiler_directives={"language_level": "3"},
    )
except ImportError:
    pass

setup(ext_modules=ext_modules)
