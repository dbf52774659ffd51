"""Build script: compiles the optional accelerator extension when possible.

The package is fully functional without the extension (a pure-Python
implementation of the same kernels is selected at import time), so any
failure to cythonize or compile degrades to a warning instead of aborting
the install.  Set QNABLA_NO_EXT=1 to skip the extension entirely.
"""

import os

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # missing compiler, broken toolchain, ...
            print(f"qnabla: skipping compiled kernels ({exc}); using pure-Python fallback")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"qnabla: skipping {ext.name} ({exc}); using pure-Python fallback")


ext_modules = []
pyx = os.path.join("src", "qnabla", "_kernels.pyx")
if os.environ.get("QNABLA_NO_EXT") != "1" and os.path.exists(pyx):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            [Extension("qnabla._kernels", [pyx])],
            compiler_directives={
                "language_level": 3,
                "boundscheck": False,
                "cdivision": True,
            },
        )
    except ImportError:
        print("qnabla: Cython not available; using pure-Python kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": OptionalBuildExt})
