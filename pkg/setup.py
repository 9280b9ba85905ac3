"""Build script: compiles the optional Monte Carlo amplitude kernel.

The compiled extension is a performance add-on only; the package falls back
to a NumPy implementation at import time when the extension is missing.
A failed compile therefore downgrades the build instead of breaking it.

-ffp-contract=off keeps the C arithmetic bit-identical to the NumPy
fallback (no FMA contraction of a*a + b*b).
"""

import sys

from setuptools import setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler or Cython missing
            print(f"warning: compiled kernel skipped ({exc}); "
                  "using NumPy fallback", file=sys.stderr)

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            print(f"warning: building {ext.name} failed ({exc}); "
                  "using NumPy fallback", file=sys.stderr)


def extensions():
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "starnoma._ampcore",
                ["src/starnoma/_ampcore.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3", "-ffp-contract=off"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
