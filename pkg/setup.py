import os

from setuptools import Extension, setup

ext_modules = []
if os.environ.get("REALODE_NO_EXT", "") in ("", "0"):
    try:
        import numpy as np
        from Cython.Build import cythonize
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [Extension("realode._rk4", ["src/realode/_rk4.pyx"], include_dirs=[np.get_include()])],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)
