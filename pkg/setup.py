"""Build script: compiles the optional Cython simulation kernel.

The package works without the extension (a pure-Python kernel is selected at
import time), so a missing Cython or a failed compile must not break the
install. Set SNNKIT_PURE=1 to skip the extension build entirely.
"""

import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("SNNKIT_PURE") != "1":
    try:
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        extension = Extension(
            "snnkit._kernel_cy",
            ["src/snnkit/_kernel_cy.pyx"],
            extra_compile_args=["-O2"],
        )
        extension.optional = True
        ext_modules = cythonize(
            [extension],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
