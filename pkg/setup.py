"""Builds the optional compiled kernel extension.

The package works without it: graphilosophy.kernels falls back to the
numpy implementations when the extension is absent.
"""

import sys

from setuptools import setup

try:
    import numpy as np
    from Cython.Build import cythonize
    from setuptools import Extension

    extensions = cythonize(
        [
            Extension(
                "graphilosophy.kernels._ckern",
                ["src/graphilosophy/kernels/_ckern.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # pragma: no cover - build environments without Cython
    print(f"warning: compiled kernels skipped ({exc}); pure fallback will be used", file=sys.stderr)
    extensions = []

setup(ext_modules=extensions)
