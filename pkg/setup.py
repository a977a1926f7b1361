"""Build script: compiles the optional fast-core extension.

The extension is a performance twin of ``halflinegp._pycore``; the package
works (more slowly) without it, so any build failure just skips it.
"""

import warnings

from setuptools import Extension, setup
from setuptools.command.build_ext import build_ext


class OptionalBuildExt(build_ext):
    """Best-effort build: fall back to the pure-Python core on failure."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # compiler missing, etc.
            warnings.warn(f"fast-core extension not built ({exc}); "
                          "falling back to the pure-Python core")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:
            warnings.warn(f"fast-core extension {ext.name} failed to build "
                          f"({exc}); falling back to the pure-Python core")


def extensions():
    try:
        from Cython.Build import cythonize
    except ImportError:
        warnings.warn("Cython not available; building without the fast core")
        return []
    ext = Extension(
        "halflinegp._fastcore",
        ["src/halflinegp/_fastcore.pyx"],
        extra_compile_args=["-O3"],
    )
    return cythonize([ext], language_level=3)


setup(ext_modules=extensions(), cmdclass={"build_ext": OptionalBuildExt})
