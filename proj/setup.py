import os

from pybind11.setup_helpers import ParallelCompile, Pybind11Extension, build_ext
from setuptools import setup

SOURCES = [
    "src/bindings.cpp",
    "src/equilibria.cpp",
    "src/flow.cpp",
    "src/limit_checks.cpp",
    "src/model.cpp",
    "src/rng.cpp",
    "src/simplex.cpp",
    "src/simulate.cpp",
    "src/wlan.cpp",
]


def eigen_include() -> str:
    for candidate in ("/usr/include/eigen3", "/usr/local/include/eigen3"):
        if os.path.isdir(candidate):
            return candidate
    raise RuntimeError("Eigen3 headers not found; install libeigen3-dev")


ParallelCompile("MEANFIELD_BUILD_JOBS", default=os.cpu_count() or 1).install()

setup(
    ext_modules=[
        Pybind11Extension(
            "meanfield._core",
            SOURCES,
            include_dirs=["include", eigen_include()],
            cxx_std=20,
        )
    ],
    cmdclass={"build_ext": build_ext},
)
