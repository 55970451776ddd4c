from pybind11.setup_helpers import Pybind11Extension, build_ext
from setuptools import setup

ext_modules = [
    Pybind11Extension(
        "dilated._core",
        sources=[
            "src/quantale.cpp",
            "src/measure.cpp",
            "src/psd.cpp",
            "src/cltsys.cpp",
            "src/serialize.cpp",
            "src/python/module.cpp",
        ],
        include_dirs=["include", "vendor"],
        cxx_std=20,
    ),
]

setup(ext_modules=ext_modules, cmdclass={"build_ext": build_ext})
