"""Builds the optional compiled kernel extension.

The package works without it: wikiforensics._kernels falls back to the
pure-Python twin when the extension is absent or WIKIFORENSICS_PURE is set.
"""

import os

from setuptools import setup
from setuptools.command.build_ext import build_ext


class optional_build_ext(build_ext):
    """Never fail the install because the C toolchain is unavailable."""

    def run(self):
        try:
            super().run()
        except Exception as exc:  # noqa: BLE001
            print(f"warning: skipping compiled kernels ({exc})")

    def build_extension(self, ext):
        try:
            super().build_extension(ext)
        except Exception as exc:  # noqa: BLE001
            print(f"warning: failed to build {ext.name} ({exc}); "
                  "pure-Python kernels will be used")


ext_modules = []
if not os.environ.get("WIKIFORENSICS_SKIP_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/wikiforensics/_kernels/_ext.pyx"],
            compiler_directives={"language_level": "3"},
        )
    except ImportError:
        print("warning: Cython not available; building without compiled kernels")

setup(ext_modules=ext_modules, cmdclass={"build_ext": optional_build_ext})
