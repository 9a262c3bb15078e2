from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:
    # No Cython: install with the pure-numpy kernel backend only.
    ext_modules = []
else:
    ext_modules = cythonize(
        [
            Extension(
                "counterbelief._kernels._core",
                ["src/counterbelief/_kernels/_core.pyx"],
                extra_compile_args=["-O3"],
            )
        ],
        compiler_directives={"language_level": "3"},
    )

setup(ext_modules=ext_modules)
