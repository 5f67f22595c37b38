import glob

from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

# The extension compiles the C++ core directly; no separate library build is
# needed. Eigen comes from the system include path.
ext = Pybind11Extension(
    "fxcov._core",
    sorted(glob.glob("src/*.cpp")) + ["python/src/bindings.cpp"],
    include_dirs=["include", "/usr/include/eigen3"],
    cxx_std=20,
    extra_compile_args=["-O2"],
)

setup(ext_modules=[ext], cmdclass={"build_ext": build_ext})
