"""Build hook: compile the optional census kernel extension.

The package works without the extension (pure-Python fallback selected at
import time); a failed compile therefore only costs speed, not correctness.
"""

from setuptools import Extension, setup


def _extensions():
    import os

    if not os.path.exists("src/finring/_kernels/_ckernels.pyx"):
        return []
    try:
        from Cython.Build import cythonize
    except ImportError:
        return []
    return cythonize(
        [
            Extension(
                "finring._kernels._ckernels",
                ["src/finring/_kernels/_ckernels.pyx"],
            )
        ],
        language_level=3,
    )


setup(ext_modules=_extensions())
