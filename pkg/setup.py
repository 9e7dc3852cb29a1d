"""Build script for the optional compiled max-plus kernel.

The package works without the extension (a NumPy fallback is selected at
import time), so the build is marked optional and a failed compile does not
fail the install.
"""

import numpy as np
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "tropigait._mpkernels",
                ["src/tropigait/_mpkernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                optional=True,
            )
        ],
        language_level=3,
    )

setup(ext_modules=ext_modules)
