from setuptools import Extension, setup
from Cython.Build import cythonize

setup(
    ext_modules=cythonize(
        [Extension("fixprop._ckernels", sources=["src/fixprop/_ckernels.pyx"])],
        compiler_directives={"language_level": "3"},
    )
)
